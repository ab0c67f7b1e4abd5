#include "tvcn/graph.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tvcn {

namespace {

bool sorted_contains(const std::vector<NodeId>& v, NodeId x) {
  return std::binary_search(v.begin(), v.end(), x);
}

void sorted_insert(std::vector<NodeId>& v, NodeId x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void sorted_erase(std::vector<NodeId>& v, NodeId x) {
  v.erase(std::lower_bound(v.begin(), v.end(), x));
}

}  // namespace

Graph Graph::ring(int n) {
  Graph g(n);
  if (n <= 1) return g;
  if (n == 2) {
    g.add_edge(0, 1);
    return g;
  }
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph Graph::path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph Graph::star(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

std::size_t Graph::degree_sum() const {
  std::size_t s = 0;
  for (const auto& nb : adj_) s += nb.size();
  return s;
}

void Graph::check_node(NodeId v) const {
  if (!has_node(v))
    throw UnknownNode("unknown node " + std::to_string(v));
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  check_node(a);
  check_node(b);
  return sorted_contains(adj_[a], b);
}

int Graph::degree(NodeId v) const {
  check_node(v);
  return static_cast<int>(adj_[v].size());
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
  check_node(v);
  return adj_[v];
}

NodeId Graph::add_node() {
  adj_.emplace_back();
  return node_count() - 1;
}

void Graph::add_node(NodeId id) {
  if (id < node_count())
    throw DuplicateNode("node " + std::to_string(id) + " already present");
  if (id != node_count())
    throw Error("node labels must be dense; next label is " +
                std::to_string(node_count()));
  adj_.emplace_back();
}

void Graph::add_edge(NodeId a, NodeId b) {
  check_node(a);
  check_node(b);
  if (a == b) throw SelfLoop("self-loop at node " + std::to_string(a));
  if (sorted_contains(adj_[a], b))
    throw DuplicateEdge("edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ") already present");
  sorted_insert(adj_[a], b);
  sorted_insert(adj_[b], a);
  ++edge_count_;
}

void Graph::remove_edge(NodeId a, NodeId b) {
  check_node(a);
  check_node(b);
  if (!sorted_contains(adj_[a], b))
    throw UnknownEdge("edge (" + std::to_string(a) + "," + std::to_string(b) +
                      ") not present");
  sorted_erase(adj_[a], b);
  sorted_erase(adj_[b], a);
  --edge_count_;
}

void Graph::rewire_edge(NodeId a, NodeId old_b, NodeId new_b) {
  check_node(a);
  check_node(old_b);
  check_node(new_b);
  if (a == new_b) throw SelfLoop("rewire would create self-loop");
  if (!sorted_contains(adj_[a], old_b))
    throw UnknownEdge("edge (" + std::to_string(a) + "," +
                      std::to_string(old_b) + ") not present");
  if (sorted_contains(adj_[a], new_b))
    throw DuplicateEdge("edge (" + std::to_string(a) + "," +
                        std::to_string(new_b) + ") already present");
  sorted_erase(adj_[a], old_b);
  sorted_erase(adj_[old_b], a);
  sorted_insert(adj_[a], new_b);
  sorted_insert(adj_[new_b], a);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId a = 0; a < node_count(); ++a)
    for (NodeId b : adj_[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

std::vector<int> Graph::components(int* n_components) const {
  std::vector<int> label(adj_.size(), -1);
  int next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < node_count(); ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adj_[u])
        if (label[v] == -1) {
          label[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  if (n_components) *n_components = next;
  return label;
}

bool Graph::is_connected() const {
  if (node_count() <= 1) return true;
  int n = 0;
  components(&n);
  return n == 1;
}

Graph Graph::induced_subgraph(std::span<const NodeId> keep,
                              std::vector<NodeId>* orig_label) const {
  std::vector<NodeId> nodes(keep.begin(), keep.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (NodeId v : nodes) check_node(v);

  std::vector<int> remap(adj_.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) remap[nodes[i]] = static_cast<int>(i);

  Graph sub(static_cast<int>(nodes.size()));
  for (NodeId a : nodes)
    for (NodeId b : adj_[a])
      if (a < b && remap[b] != -1) sub.add_edge(remap[a], remap[b]);
  if (orig_label) *orig_label = std::move(nodes);
  return sub;
}

Graph Graph::largest_component(std::vector<NodeId>* orig_label) const {
  int n = 0;
  std::vector<int> label = components(&n);
  std::vector<int> size(static_cast<std::size_t>(std::max(n, 1)), 0);
  for (int l : label) ++size[l];
  int best = 0;
  for (int c = 1; c < n; ++c)
    if (size[c] > size[best]) best = c;
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < node_count(); ++v)
    if (label[v] == best) keep.push_back(v);
  return induced_subgraph(keep, orig_label);
}

void save_edge_list(const Graph& g, std::ostream& os) {
  os << "#nodes " << g.node_count() << "\n";
  for (auto [a, b] : g.edges()) os << a << " " << b << "\n";
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  save_edge_list(g, os);
}

Graph load_edge_list(std::istream& is) {
  std::string tag;
  int n = -1;
  if (!(is >> tag >> n) || tag != "#nodes" || n < 0)
    throw Error("edge list: expected '#nodes <N>' header");
  Graph g(n);
  NodeId a, b;
  while (is >> a >> b) g.add_edge(a, b);
  return g;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  return load_edge_list(is);
}

}  // namespace tvcn
