#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tvcn/errors.hpp"

namespace tvcn {

using NodeId = int;

// Undirected simple graph over dense integer labels 0..node_count()-1,
// assigned in arrival order. Neighbor lists are kept sorted ascending so
// every traversal is deterministic.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {}

  static Graph ring(int n);
  static Graph path(int n);
  static Graph complete(int n);
  static Graph star(int leaves);  // hub is node 0

  int node_count() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree_sum() const;  // == 2 * edge_count()

  bool has_node(NodeId v) const { return v >= 0 && v < node_count(); }
  bool has_edge(NodeId a, NodeId b) const;
  int degree(NodeId v) const;
  const std::vector<NodeId>& neighbors(NodeId v) const;

  NodeId add_node();        // appends label node_count()
  void add_node(NodeId id); // id must equal node_count()
  void add_edge(NodeId a, NodeId b);
  void remove_edge(NodeId a, NodeId b);
  // remove (a, old_b) and add (a, new_b) as one step; edge count unchanged.
  void rewire_edge(NodeId a, NodeId old_b, NodeId new_b);

  std::vector<std::pair<NodeId, NodeId>> edges() const;  // a < b, sorted

  bool is_connected() const;
  // Per-node component label in [0, n_components); labels follow smallest
  // contained node id.
  std::vector<int> components(int* n_components = nullptr) const;
  // Subgraph induced by `keep` (duplicates ignored), relabelled densely in
  // ascending original order. If orig_label is given, it receives the
  // original id of each new node.
  Graph induced_subgraph(std::span<const NodeId> keep,
                         std::vector<NodeId>* orig_label = nullptr) const;
  Graph largest_component(std::vector<NodeId>* orig_label = nullptr) const;

 private:
  void check_node(NodeId v) const;

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_ = 0;
};

// Graph per time instant; growth models only ever add nodes, so node sets
// are monotone non-decreasing across snapshots.
struct SnapshotSequence {
  std::vector<Graph> snapshots;
  int tau() const { return static_cast<int>(snapshots.size()); }
};

// Edge-list text format: a "#nodes <N>" header line, then one "a b" line
// per edge with a < b, edges sorted. Canonical output round-trips
// bit-exact.
void save_edge_list(const Graph& g, std::ostream& os);
void save_edge_list(const Graph& g, const std::string& path);
Graph load_edge_list(std::istream& is);
Graph load_edge_list(const std::string& path);

}  // namespace tvcn
