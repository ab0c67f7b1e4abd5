#include "tvcn/routing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "tvcn/csv.hpp"

namespace tvcn {

const char* to_string(RouteStrategy s) {
  switch (s) {
    case RouteStrategy::WG_MIN: return "WG_MIN";
    case RouteStrategy::WG_MAX: return "WG_MAX";
    case RouteStrategy::RANDOM_SP: return "RANDOM_SP";
  }
  return "?";
}

RouteStrategy route_strategy_from_string(const std::string& s) {
  if (s == "WG_MIN") return RouteStrategy::WG_MIN;
  if (s == "WG_MAX") return RouteStrategy::WG_MAX;
  if (s == "RANDOM_SP") return RouteStrategy::RANDOM_SP;
  throw InvalidConfig("unknown route strategy '" + s + "'");
}

namespace {

constexpr std::uint64_t kSigmaCap = std::uint64_t(1) << 62;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a || s > kSigmaCap ? kSigmaCap : s;
}

// BFS distances and (saturating) shortest-path counts from s.
void bfs_sigma(const Graph& g, NodeId s, std::vector<int>& dist,
               std::vector<std::uint64_t>& sigma) {
  dist.assign(g.node_count(), -1);
  sigma.assign(g.node_count(), 0);
  std::deque<NodeId> queue;
  dist[s] = 0;
  sigma[s] = 1;
  queue.push_back(s);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
      if (dist[v] == dist[u] + 1) sigma[v] = sat_add(sigma[v], sigma[u]);
    }
  }
}

void bfs_dist(const Graph& g, NodeId s, std::vector<int>& dist) {
  dist.assign(g.node_count(), -1);
  std::deque<NodeId> queue;
  dist[s] = 0;
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
}

void check_endpoints(const Graph& g, NodeId s, NodeId d) {
  if (!g.has_node(s) || !g.has_node(d))
    throw UnknownNode("routing: endpoint not in graph");
  if (s == d) throw Error("routing: source equals destination");
}

}  // namespace

std::uint64_t shortest_path_count(const Graph& g, NodeId s, NodeId d) {
  check_endpoints(g, s, d);
  std::vector<int> dist;
  std::vector<std::uint64_t> sigma;
  bfs_sigma(g, s, dist, sigma);
  if (dist[d] < 0)
    throw Unreachable("no path from " + std::to_string(s) + " to " +
                      std::to_string(d));
  return sigma[d];
}

std::vector<std::vector<NodeId>> all_shortest_paths(const Graph& g, NodeId s,
                                                    NodeId d,
                                                    std::uint64_t cap) {
  check_endpoints(g, s, d);
  std::vector<int> dist_s;
  std::vector<std::uint64_t> sigma;
  bfs_sigma(g, s, dist_s, sigma);
  if (dist_s[d] < 0)
    throw Unreachable("no path from " + std::to_string(s) + " to " +
                      std::to_string(d));
  if (sigma[d] > cap)
    throw PathExplosion("shortest-path count " +
                        (sigma[d] >= kSigmaCap ? std::string(">= 2^62")
                                               : std::to_string(sigma[d])) +
                        " exceeds cap " + std::to_string(cap));
  std::vector<int> dist_d;
  bfs_dist(g, d, dist_d);
  const int total = dist_s[d];

  // Iterative DFS over the shortest-path DAG; neighbor lists are sorted,
  // so paths emerge in lexicographic order.
  std::vector<std::vector<NodeId>> paths;
  paths.reserve(static_cast<std::size_t>(sigma[d]));
  std::vector<NodeId> current{s};
  // Stack of (node, next-neighbor-index) frames.
  std::vector<std::pair<NodeId, std::size_t>> stack{{s, 0}};
  while (!stack.empty()) {
    auto& [u, idx] = stack.back();
    if (u == d) {
      paths.push_back(current);
      stack.pop_back();
      current.pop_back();
      continue;
    }
    const auto& nb = g.neighbors(u);
    bool descended = false;
    while (idx < nb.size()) {
      const NodeId v = nb[idx++];
      if (dist_s[v] == dist_s[u] + 1 && dist_d[v] >= 0 &&
          dist_s[v] + dist_d[v] == total) {
        current.push_back(v);
        stack.emplace_back(v, 0);
        descended = true;
        break;
      }
    }
    if (!descended) {
      stack.pop_back();
      current.pop_back();
    }
  }
  return paths;
}

double path_weight(std::span<const NodeId> path,
                   std::span<const double> bc_norm) {
  double w = 0.0;
  for (NodeId v : path) w += bc_norm[v];
  return w;
}

Route select_route(const Graph& g, const User& user, RouteStrategy strategy,
                   std::span<const double> bc_norm, Rng& rng,
                   std::uint64_t cap) {
  const auto paths = all_shortest_paths(g, user.s, user.d, cap);
  Route route;
  route.user = user;
  route.k_count = paths.size();
  std::size_t pick = 0;
  if (strategy == RouteStrategy::RANDOM_SP) {
    pick = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(paths.size()) - 1));
  } else {
    double best = path_weight(paths[0], bc_norm);
    for (std::size_t i = 1; i < paths.size(); ++i) {
      const double w = path_weight(paths[i], bc_norm);
      const bool better =
          strategy == RouteStrategy::WG_MIN ? w < best : w > best;
      if (better) {
        best = w;
        pick = i;
      }
    }
  }
  route.path = paths[pick];
  route.weight = path_weight(route.path, bc_norm);
  return route;
}

Route select_route_dag(const Graph& g, const User& user,
                       RouteStrategy strategy, std::span<const double> bc_norm,
                       Rng& rng) {
  check_endpoints(g, user.s, user.d);
  std::vector<int> dist_s;
  std::vector<std::uint64_t> sigma;
  bfs_sigma(g, user.s, dist_s, sigma);
  if (dist_s[user.d] < 0)
    throw Unreachable("no path from " + std::to_string(user.s) + " to " +
                      std::to_string(user.d));
  Route route;
  route.user = user;
  route.k_count = sigma[user.d];

  if (strategy == RouteStrategy::RANDOM_SP) {
    // Walk backward from d, picking predecessors proportionally to their
    // path counts; uniform over all shortest paths.
    std::vector<NodeId> rev{user.d};
    NodeId w = user.d;
    while (w != user.s) {
      std::vector<NodeId> preds;
      std::vector<double> wts;
      for (NodeId p : g.neighbors(w))
        if (dist_s[p] == dist_s[w] - 1 && sigma[p] > 0) {
          preds.push_back(p);
          wts.push_back(static_cast<double>(sigma[p]));
        }
      w = preds[rng.sample_index(wts)];
      rev.push_back(w);
    }
    route.path.assign(rev.rbegin(), rev.rend());
    route.weight = path_weight(route.path, bc_norm);
    return route;
  }

  std::vector<int> dist_d;
  bfs_dist(g, user.d, dist_d);
  const int total = dist_s[user.d];
  auto on_dag = [&](NodeId v) {
    return dist_s[v] >= 0 && dist_d[v] >= 0 && dist_s[v] + dist_d[v] == total;
  };

  // best[v] = optimal W_g over v..d suffixes, filled from d backward.
  const double unset = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> best(g.node_count(), unset);
  std::vector<std::vector<NodeId>> layers(total + 1);
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (on_dag(v)) layers[dist_s[v]].push_back(v);
  best[user.d] = bc_norm[user.d];
  for (int layer = total - 1; layer >= 0; --layer) {
    for (NodeId u : layers[layer]) {
      double opt = unset;
      for (NodeId v : g.neighbors(u)) {
        if (!on_dag(v) || dist_s[v] != dist_s[u] + 1) continue;
        if (opt != opt ||
            (strategy == RouteStrategy::WG_MIN ? best[v] < opt
                                                : best[v] > opt))
          opt = best[v];
      }
      best[u] = bc_norm[u] + opt;
    }
  }

  // Forward walk; at each step take the smallest-label successor whose
  // suffix value attains the optimum (lexicographic tie-break).
  NodeId u = user.s;
  route.path.push_back(u);
  while (u != user.d) {
    double opt = unset;
    for (NodeId v : g.neighbors(u)) {
      if (!on_dag(v) || dist_s[v] != dist_s[u] + 1) continue;
      if (opt != opt ||
          (strategy == RouteStrategy::WG_MIN ? best[v] < opt : best[v] > opt))
        opt = best[v];
    }
    for (NodeId v : g.neighbors(u)) {
      if (!on_dag(v) || dist_s[v] != dist_s[u] + 1) continue;
      if (best[v] == opt) {
        u = v;
        break;
      }
    }
    route.path.push_back(u);
  }
  route.weight = path_weight(route.path, bc_norm);
  return route;
}

std::vector<User> sample_users(const Graph& g, int count, Rng& rng) {
  const int n = g.node_count();
  int ncomp = 0;
  const auto comp = g.components(&ncomp);
  std::vector<std::uint64_t> comp_size(ncomp, 0);
  for (int c : comp) ++comp_size[c];
  std::uint64_t eligible = 0;
  for (auto sz : comp_size) eligible += sz * (sz - 1);
  if (static_cast<std::uint64_t>(count) > eligible)
    throw Error("sample_users: not enough connected ordered pairs");

  std::vector<User> users;
  users.reserve(count);
  std::unordered_set<std::uint64_t> used;
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = 1000ull * count + 1000ull;
  while (static_cast<int>(users.size()) < count && attempts < max_attempts) {
    ++attempts;
    const NodeId s = rng.uniform_int(0, n - 1);
    const NodeId d = rng.uniform_int(0, n - 1);
    if (s == d || comp[s] != comp[d]) continue;
    const std::uint64_t key = static_cast<std::uint64_t>(s) * n + d;
    if (!used.insert(key).second) continue;
    users.push_back(User{static_cast<int>(users.size()), s, d});
  }
  if (static_cast<int>(users.size()) < count) {
    // Dense fallback: enumerate remaining eligible pairs deterministically.
    for (NodeId s = 0; s < n && static_cast<int>(users.size()) < count; ++s)
      for (NodeId d = 0; d < n && static_cast<int>(users.size()) < count; ++d) {
        if (s == d || comp[s] != comp[d]) continue;
        const std::uint64_t key = static_cast<std::uint64_t>(s) * n + d;
        if (!used.insert(key).second) continue;
        users.push_back(User{static_cast<int>(users.size()), s, d});
      }
  }
  return users;
}

void write_routes_header(std::ostream& os) {
  os << "user,s,d,strategy,path_len,k_count,w_g,path\n";
}

void write_route_row(std::ostream& os, const Route& r, RouteStrategy strategy) {
  os << r.user.id << "," << r.user.s << "," << r.user.d << ","
     << to_string(strategy) << "," << r.path.size() - 1 << "," << r.k_count
     << "," << csv_double(r.weight) << ",";
  for (std::size_t i = 0; i < r.path.size(); ++i) {
    if (i) os << "-";
    os << r.path[i];
  }
  os << "\n";
}

}  // namespace tvcn
