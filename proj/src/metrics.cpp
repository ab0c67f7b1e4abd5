#include "tvcn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>

#include "tvcn/csv.hpp"
#include "tvcn/rng.hpp"

namespace tvcn {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// One Brandes source pass: BFS shortest-path counts, then dependency
// accumulation. Calls sink(v, delta_v) for every v != s.
template <typename Sink>
void brandes_source(const Graph& g, NodeId s, std::vector<int>& dist,
                    std::vector<std::uint64_t>& sigma,
                    std::vector<double>& delta,
                    std::vector<std::vector<NodeId>>& preds,
                    std::vector<NodeId>& order, Sink&& sink) {
  const int n = g.node_count();
  dist.assign(n, -1);
  sigma.assign(n, 0);
  delta.assign(n, 0.0);
  for (auto& p : preds) p.clear();
  order.clear();

  std::deque<NodeId> queue;
  dist[s] = 0;
  sigma[s] = 1;
  queue.push_back(s);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    order.push_back(u);
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
      if (dist[v] == dist[u] + 1) {
        sigma[v] += sigma[u];
        preds[v].push_back(u);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId w = *it;
    for (NodeId p : preds[w])
      delta[p] += static_cast<double>(sigma[p]) / static_cast<double>(sigma[w]) *
                  (1.0 + delta[w]);
    if (w != s) sink(w, delta[w]);
  }
}

struct BrandesScratch {
  explicit BrandesScratch(int n)
      : dist(n), sigma(n), delta(n), preds(n) {
    order.reserve(n);
  }
  std::vector<int> dist;
  std::vector<std::uint64_t> sigma;
  std::vector<double> delta;
  std::vector<std::vector<NodeId>> preds;
  std::vector<NodeId> order;
};

}  // namespace

BetweennessResult betweenness(const Graph& g) {
  const int n = g.node_count();
  if (n < 3) throw TooSmall("betweenness: need at least 3 nodes");
  BetweennessResult r;
  r.raw.assign(n, 0.0);
  BrandesScratch ws(n);
  for (NodeId s = 0; s < n; ++s)
    brandes_source(g, s, ws.dist, ws.sigma, ws.delta, ws.preds, ws.order,
                   [&](NodeId v, double d) { r.raw[v] += d; });
  // Each unordered pair was accumulated from both endpoints.
  for (double& x : r.raw) x *= 0.5;
  r.norm.resize(n);
  const double scale = 2.0 / (static_cast<double>(n - 1) * (n - 2));
  for (int v = 0; v < n; ++v) r.norm[v] = r.raw[v] * scale;
  return r;
}

std::vector<double> weighted_dependencies(const Graph& g,
                                          std::span<const double> weight) {
  const int n = g.node_count();
  if (static_cast<int>(weight.size()) != n)
    throw Error("weighted_dependencies: weight size mismatch");
  std::vector<double> out(n, 0.0);
  BrandesScratch ws(n);
  for (NodeId s = 0; s < n; ++s) {
    if (weight[s] == 0.0) continue;
    brandes_source(g, s, ws.dist, ws.sigma, ws.delta, ws.preds, ws.order,
                   [&](NodeId v, double d) { out[v] += weight[s] * d; });
  }
  return out;
}

EvcResult eigenvector_centrality(const Graph& g, double tol, int max_iter) {
  const int n = g.node_count();
  if (n == 0) throw TooSmall("eigenvector_centrality: empty graph");
  EvcResult res;
  if (g.edge_count() == 0)
    throw EmptyGraph("eigenvector_centrality: graph has no edges");

  std::vector<double> x(n, 1.0 / n), next(n), prev;
  bool damped = false;
  for (int it = 1; it <= max_iter; ++it) {
    double sum = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (NodeId u : g.neighbors(v)) acc += x[u];
      next[v] = acc;
      sum += acc;
    }
    for (double& e : next) e /= sum;
    if (damped)
      for (NodeId v = 0; v < n; ++v) next[v] = 0.5 * (next[v] + x[v]);

    double diff = 0.0;
    for (NodeId v = 0; v < n; ++v) diff = std::max(diff, std::abs(next[v] - x[v]));
    if (!damped && !prev.empty()) {
      double osc = 0.0;
      for (NodeId v = 0; v < n; ++v)
        osc = std::max(osc, std::abs(next[v] - prev[v]));
      // Period-2 cycle: successive iterates far apart, alternate ones close.
      if (osc < 0.01 * diff) damped = true;
    }
    prev = x;
    x = next;
    res.iterations = it;
    if (diff < tol) {
      res.converged = true;
      break;
    }
  }
  res.values = std::move(x);
  return res;
}

double clustering_coefficient(const Graph& g) {
  const int n = g.node_count();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(v);
    const int k = static_cast<int>(nb.size());
    if (k < 2) continue;
    int links = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (g.has_edge(nb[i], nb[j])) ++links;
    total += 2.0 * links / (static_cast<double>(k) * (k - 1));
  }
  return total / n;
}

PathStats apl_diameter(const Graph& g) {
  const int n = g.node_count();
  PathStats st;
  if (n < 2) return st;
  std::vector<int> dist(n);
  std::deque<NodeId> queue;
  double sum = 0.0;
  std::uint64_t pairs = 0;
  int dmax = 0;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : g.neighbors(u))
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (NodeId v = s + 1; v < n; ++v)
      if (dist[v] > 0) {
        sum += dist[v];
        ++pairs;
        dmax = std::max(dmax, dist[v]);
      }
  }
  st.apl = pairs ? sum / static_cast<double>(pairs) : 0.0;
  st.diameter = dmax;
  return st;
}

namespace {

double phi_over_mask(const Graph& g, const std::vector<char>& in, int m) {
  std::uint64_t inside = 0;
  for (auto [a, b] : g.edges())
    if (in[a] && in[b]) ++inside;
  return 2.0 * static_cast<double>(inside) /
         (static_cast<double>(m) * (m - 1));
}

}  // namespace

double rich_club_phi(const Graph& g, int k) {
  std::vector<char> in(g.node_count(), 0);
  int m = 0;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) > k) {
      in[v] = 1;
      ++m;
    }
  if (m < 2)
    throw UndefinedThreshold("rich_club_phi: fewer than 2 nodes above k=" +
                             std::to_string(k));
  return phi_over_mask(g, in, m);
}

std::vector<double> rich_club_profile(const Graph& g) {
  int kmax = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) kmax = std::max(kmax, g.degree(v));
  std::vector<double> phi;
  phi.reserve(kmax);
  for (int k = 0; k < kmax; ++k) {
    try {
      phi.push_back(rich_club_phi(g, k));
    } catch (const UndefinedThreshold&) {
      phi.push_back(kNaN);
    }
  }
  return phi;
}

Graph degree_preserving_randomization(const Graph& g, std::uint64_t seed,
                                      int swaps_per_edge) {
  Graph out = g;
  auto edges = out.edges();
  const std::size_t ne = edges.size();
  if (ne < 2) return out;
  Rng rng(seed);
  const std::size_t attempts = swaps_per_edge * ne;
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t i = rng.uniform_int(0, static_cast<int>(ne) - 1);
    const std::size_t j = rng.uniform_int(0, static_cast<int>(ne) - 1);
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng.uniform() < 0.5) std::swap(c, d);
    // Proposed replacement: (a,d) and (c,b).
    if (a == d || c == b) continue;
    if (std::minmax(a, d) == std::minmax(c, b)) continue;
    if (out.has_edge(a, d) || out.has_edge(c, b)) continue;
    out.remove_edge(a, b);
    out.remove_edge(c, d);
    out.add_edge(a, d);
    out.add_edge(c, b);
    edges[i] = std::minmax(a, d);
    edges[j] = std::minmax(c, b);
  }
  return out;
}

RichClubResult rich_club(const Graph& g, std::uint64_t null_seed,
                         int randomizations) {
  RichClubResult res;
  const double mean_deg =
      g.node_count() ? static_cast<double>(g.degree_sum()) / g.node_count() : 0.0;
  res.k_star = static_cast<int>(std::ceil(mean_deg));
  res.phi = rich_club_phi(g, res.k_star);
  double acc = 0.0;
  for (int i = 0; i < randomizations; ++i) {
    const Graph null_model =
        degree_preserving_randomization(g, null_seed + static_cast<std::uint64_t>(i));
    acc += rich_club_phi(null_model, res.k_star);
  }
  res.phi_rand = acc / randomizations;
  res.rc = res.phi_rand > 0.0 ? res.phi / res.phi_rand : kNaN;
  return res;
}

double assortativity(const Graph& g) {
  if (g.edge_count() == 0) throw EmptyGraph("assortativity: no edges");
  double sx = 0.0, sxx = 0.0, sxy = 0.0;
  for (auto [a, b] : g.edges()) {
    const double ka = g.degree(a);
    const double kb = g.degree(b);
    sx += ka + kb;
    sxx += ka * ka + kb * kb;
    sxy += 2.0 * ka * kb;
  }
  const double m = 2.0 * static_cast<double>(g.edge_count());
  const double mean = sx / m;
  const double var = sxx / m - mean * mean;
  if (var <= 1e-12) return kNaN;
  return (sxy / m - mean * mean) / var;
}

MetricsReport compute_metrics(const Graph& g, std::uint64_t rc_seed) {
  MetricsReport r;
  r.n = g.node_count();
  r.e = g.edge_count();
  const auto bc = betweenness(g);
  r.g_max_norm = *std::max_element(bc.norm.begin(), bc.norm.end());
  const auto ps = apl_diameter(g);
  r.apl = ps.apl;
  r.diameter = ps.diameter;
  try {
    r.rc = rich_club(g, rc_seed).rc;
  } catch (const UndefinedThreshold&) {
    r.rc = kNaN;
  }
  r.clc = clustering_coefficient(g);
  r.assort = assortativity(g);
  return r;
}

void write_metrics_header(std::ostream& os) {
  os << "t,N,E,g_max_norm,apl,diameter,rc,clc,assortativity\n";
}

void write_metrics_row(std::ostream& os, int t, const MetricsReport& r) {
  os << t << "," << r.n << "," << r.e << "," << csv_double(r.g_max_norm) << ","
     << csv_double(r.apl) << "," << r.diameter << "," << csv_double(r.rc)
     << "," << csv_double(r.clc) << "," << csv_double(r.assort) << "\n";
}

}  // namespace tvcn
