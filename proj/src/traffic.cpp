#include "tvcn/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "tvcn/csv.hpp"
#include "tvcn/metrics.hpp"

namespace tvcn {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kInf = std::numeric_limits<double>::infinity();

// Least-squares slope of y over x = 0..n-1.
double regression_slope(std::span<const std::int64_t> y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double xbar = (n - 1) / 2.0;
  double ybar = 0.0;
  for (auto v : y) ybar += static_cast<double>(v);
  ybar /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - xbar;
    num += dx * (static_cast<double>(y[i]) - ybar);
    den += dx * dx;
  }
  return num / den;
}

double theta_from_trace(std::span<const std::int64_t> trace, int window,
                        double cap_total, double lambda_total) {
  if (lambda_total <= 0.0 || trace.empty()) return 0.0;
  const std::size_t w =
      std::min<std::size_t>(static_cast<std::size_t>(window), trace.size());
  const double slope = regression_slope(trace.subspan(trace.size() - w));
  return cap_total / lambda_total * std::max(0.0, slope);
}

std::vector<NodeId> congested_nodes(std::span<const double> lambda,
                                    std::span<const double> cap) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] > cap[i]) out.push_back(static_cast<NodeId>(i));
  return out;
}

}  // namespace

void TrafficParams::validate() const {
  if (!(alpha > 0.0)) throw NonPositiveRate("alpha must be > 0");
  if (!(beta > 0.0)) throw NonPositiveRate("beta must be > 0");
  if (steps < 1) throw InvalidConfig("steps must be >= 1");
  if (warmup < 0 || window < 1) throw InvalidConfig("bad warmup/window");
  if (warmup + window > steps)
    throw InvalidConfig("warmup + window must not exceed steps");
}

std::vector<double> node_capacity(std::span<const double> evc, double beta,
                                  int n) {
  std::vector<double> cap(evc.size());
  for (std::size_t i = 0; i < evc.size(); ++i) cap[i] = beta * evc[i] * n;
  return cap;
}

std::vector<double> generation_rate(std::span<const double> bc_raw,
                                    double alpha, int diameter, int n) {
  std::vector<double> lambda(bc_raw.size());
  double gsum = 0.0;
  for (double g : bc_raw) gsum += g;
  if (gsum > 0.0) {
    for (std::size_t i = 0; i < bc_raw.size(); ++i)
      lambda[i] = alpha * diameter * n * bc_raw[i] / gsum;
  } else {
    std::fill(lambda.begin(), lambda.end(), alpha * diameter);
  }
  return lambda;
}

double lambda_c_from(std::span<const double> bc_raw,
                     std::span<const double> evc, double beta, int n) {
  if (n < 3) throw TooSmall("lambda_c: need at least 3 nodes");
  std::size_t vmax = 0;
  for (std::size_t v = 1; v < bc_raw.size(); ++v)
    if (bc_raw[v] > bc_raw[vmax]) vmax = v;
  if (!(bc_raw[vmax] > 0.0)) return kInf;
  const double c_max = beta * evc[vmax] * n;
  return c_max * (n - 1) / bc_raw[vmax];
}

double lambda_c_theoretical(const Graph& g, double beta) {
  const auto bc = betweenness(g);
  const auto evc = eigenvector_centrality(g);
  return lambda_c_from(bc.raw, evc.values, beta, g.node_count());
}

double congestion_onset_alpha(const Graph& g, double beta) {
  const int n = g.node_count();
  const auto bc = betweenness(g);
  const auto evc = eigenvector_centrality(g);
  const int diameter = apl_diameter(g).diameter;
  // Per-unit-alpha generation rates and the transit they induce.
  const auto lambda_hat = generation_rate(bc.raw, 1.0, diameter, n);
  std::vector<double> w(n);
  for (int s = 0; s < n; ++s) w[s] = lambda_hat[s] / (n - 1);
  const auto transit = weighted_dependencies(g, w);

  std::size_t vmax = 0;
  for (std::size_t v = 1; v < bc.raw.size(); ++v)
    if (bc.raw[v] > bc.raw[vmax]) vmax = v;
  const double demand = lambda_hat[vmax] + transit[vmax];
  if (!(demand > 0.0)) return kInf;
  return beta * evc.values[vmax] * n / demand;
}

double user_congestion_onset_alpha(const Graph& g,
                                   std::span<const Route> routes,
                                   double beta) {
  const int n = g.node_count();
  const auto bc = betweenness(g);
  const auto evc = eigenvector_centrality(g);
  const int diameter = apl_diameter(g).diameter;
  const auto lambda_hat = generation_rate(bc.raw, 1.0, diameter, n);
  const auto cap = node_capacity(evc.values, beta, n);

  std::vector<int> users_at(n, 0);
  for (const Route& r : routes)
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) ++users_at[r.path[i]];

  double onset = kInf;
  for (const Route& r : routes) {
    const double rate = lambda_hat[r.user.s];
    if (!(rate > 0.0)) continue;
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
      const NodeId v = r.path[i];
      onset = std::min(onset, cap[v] / (users_at[v] * rate));
    }
  }
  return onset;
}

namespace {

struct SubQueue {
  std::deque<int> packets;  // birth steps; FIFO
  double credit = 0.0;
  double share = 0.0;
};

}  // namespace

TrafficResult simulate_routes(const Graph& g, std::span<const Route> routes,
                              std::span<const double> lambda,
                              std::span<const double> cap,
                              const TrafficParams& params, Rng& rng) {
  params.validate();
  const int n = g.node_count();
  if (static_cast<int>(lambda.size()) != n || static_cast<int>(cap.size()) != n)
    throw Error("simulate_routes: rate/capacity size mismatch");
  for (double l : lambda)
    if (l < 0.0 || !std::isfinite(l))
      throw NonPositiveRate("simulate_routes: negative generation rate");

  std::vector<int> users_at(n, 0);
  for (const Route& r : routes) {
    if (r.path.size() < 2) throw InvalidRoute("route shorter than one hop");
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
      const NodeId v = r.path[i];
      if (!g.has_node(v) || !g.has_node(r.path[i + 1]) ||
          !g.has_edge(v, r.path[i + 1]))
        throw InvalidRoute("route uses a missing edge");
      ++users_at[v];
    }
  }

  // One forwarding sub-queue per (route, position); the node's capacity is
  // split equally among the streams that forward through it.
  std::vector<std::vector<SubQueue>> q(routes.size());
  for (std::size_t r = 0; r < routes.size(); ++r) {
    q[r].resize(routes[r].path.size() - 1);
    for (std::size_t i = 0; i + 1 < routes[r].path.size(); ++i) {
      const NodeId v = routes[r].path[i];
      q[r][i].share = cap[v] / users_at[v];
    }
  }

  TrafficResult res;
  for (const Route& r : routes) res.lambda_total += lambda[r.user.s];
  for (double c : cap) res.cap_total += c;
  res.congested = congested_nodes(lambda, cap);
  res.p_trace.reserve(params.steps);

  std::int64_t in_network = 0;
  double t_sum = 0.0;
  std::uint64_t t_count = 0;
  // Arrivals staged as (next position, birth step); they join their target
  // sub-queue only after every node has served, so a packet moves at most
  // one hop per step.
  std::vector<std::vector<std::pair<int, int>>> arrivals(routes.size());

  for (int step = 0; step < params.steps; ++step) {
    // 1. generation
    for (std::size_t r = 0; r < routes.size(); ++r) {
      const int born = rng.poisson(lambda[routes[r].user.s]);
      for (int k = 0; k < born; ++k) q[r][0].packets.push_back(step);
      res.generated += born;
      in_network += born;
    }
    // 2. service
    for (std::size_t r = 0; r < routes.size(); ++r) {
      auto& stream = q[r];
      for (std::size_t i = 0; i < stream.size(); ++i) {
        SubQueue& sq = stream[i];
        sq.credit += sq.share;
        int budget = static_cast<int>(sq.credit);
        sq.credit -= budget;
        while (budget > 0 && !sq.packets.empty()) {
          const int birth = sq.packets.front();
          sq.packets.pop_front();
          --budget;
          if (i + 1 == stream.size()) {
            // 3. reached destination
            ++res.delivered;
            --in_network;
            if (step >= params.warmup) {
              t_sum += step - birth + 1;
              ++t_count;
            }
          } else {
            arrivals[r].emplace_back(static_cast<int>(i) + 1, birth);
          }
        }
      }
    }
    for (std::size_t r = 0; r < routes.size(); ++r) {
      for (auto [pos, birth] : arrivals[r]) q[r][pos].packets.push_back(birth);
      arrivals[r].clear();
    }
    res.p_trace.push_back(in_network);
  }
  if (res.generated - res.delivered != static_cast<std::uint64_t>(in_network))
    throw Error("simulate_routes: packet conservation violated");

  res.mean_t = t_count ? t_sum / static_cast<double>(t_count) : kNaN;
  res.theta = theta_from_trace(res.p_trace, params.window, res.cap_total,
                               res.lambda_total);
  res.analytic_t = kNaN;
  return res;
}

TrafficResult simulate_users(const Graph& g, std::span<const Route> routes,
                             const TrafficParams& params, Rng& rng) {
  const int n = g.node_count();
  const auto bc = betweenness(g);
  const auto evc = eigenvector_centrality(g);
  const int diameter = apl_diameter(g).diameter;
  const auto lambda = generation_rate(bc.raw, params.alpha, diameter, n);
  const auto cap = node_capacity(evc.values, params.beta, n);
  TrafficResult res = simulate_routes(g, routes, lambda, cap, params, rng);
  res.analytic_t = analytic_travel_time(routes, lambda, cap);
  return res;
}

namespace {

struct GlobalPacket {
  int birth;
  int path;  // index into the route cache
  int pos;   // current node = cache[path][pos]
};

}  // namespace

TrafficResult simulate_global(const Graph& g, RouteStrategy strategy,
                              const TrafficParams& params, Rng& rng) {
  params.validate();
  const int n = g.node_count();
  const auto bc = betweenness(g);
  const auto evc = eigenvector_centrality(g);
  const int diameter = apl_diameter(g).diameter;
  const auto lambda = generation_rate(bc.raw, params.alpha, diameter, n);
  const auto cap = node_capacity(evc.values, params.beta, n);

  int ncomp = 0;
  const auto comp = g.components(&ncomp);
  std::vector<std::vector<NodeId>> members(ncomp);
  for (NodeId v = 0; v < n; ++v) members[comp[v]].push_back(v);

  // Route cache: one strategy-selected shortest path per (s,d) pair,
  // materialized on first use.
  std::vector<std::vector<NodeId>> cache;
  std::unordered_map<std::uint64_t, int> cache_index;
  auto route_id = [&](NodeId s, NodeId d) {
    const std::uint64_t key = static_cast<std::uint64_t>(s) * n + d;
    auto it = cache_index.find(key);
    if (it != cache_index.end()) return it->second;
    Route r = select_route_dag(g, User{0, s, d}, strategy, bc.norm, rng);
    cache.push_back(std::move(r.path));
    const int id = static_cast<int>(cache.size()) - 1;
    cache_index.emplace(key, id);
    return id;
  };

  TrafficResult res;
  for (double l : lambda) res.lambda_total += l;
  for (double c : cap) res.cap_total += c;
  res.congested = congested_nodes(lambda, cap);
  res.p_trace.reserve(params.steps);

  std::vector<std::deque<GlobalPacket>> q(n);
  std::vector<double> credit(n, 0.0);
  std::vector<std::pair<NodeId, GlobalPacket>> arrivals;
  std::int64_t in_network = 0;
  double t_sum = 0.0;
  std::uint64_t t_count = 0;

  for (int step = 0; step < params.steps; ++step) {
    for (NodeId s = 0; s < n; ++s) {
      if (lambda[s] <= 0.0) continue;
      const auto& pool = members[comp[s]];
      if (pool.size() < 2) continue;
      const int born = rng.poisson(lambda[s]);
      for (int k = 0; k < born; ++k) {
        NodeId d = s;
        while (d == s)
          d = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
        q[s].push_back(GlobalPacket{step, route_id(s, d), 0});
        ++res.generated;
        ++in_network;
      }
    }
    arrivals.clear();
    for (NodeId v = 0; v < n; ++v) {
      credit[v] += cap[v];
      int budget = static_cast<int>(credit[v]);
      credit[v] -= budget;
      auto& queue = q[v];
      while (budget > 0 && !queue.empty()) {
        GlobalPacket p = queue.front();
        queue.pop_front();
        --budget;
        const auto& path = cache[p.path];
        ++p.pos;
        if (static_cast<std::size_t>(p.pos) + 1 == path.size()) {
          ++res.delivered;
          --in_network;
          if (step >= params.warmup) {
            t_sum += step - p.birth + 1;
            ++t_count;
          }
        } else {
          arrivals.emplace_back(path[p.pos], p);
        }
      }
    }
    for (auto& [v, p] : arrivals) q[v].push_back(p);
    res.p_trace.push_back(in_network);
  }
  if (res.generated - res.delivered != static_cast<std::uint64_t>(in_network))
    throw Error("simulate_global: packet conservation violated");

  res.mean_t = t_count ? t_sum / static_cast<double>(t_count) : kNaN;
  res.theta = theta_from_trace(res.p_trace, params.window, res.cap_total,
                               res.lambda_total);
  res.analytic_t = kNaN;
  return res;
}

double analytic_travel_time(std::span<const Route> routes,
                            std::span<const double> lambda,
                            std::span<const double> cap) {
  if (routes.empty()) throw Error("analytic_travel_time: no routes");
  double total = 0.0;
  for (const Route& r : routes) {
    double num = 0.0;
    double cmin = kInf;
    for (NodeId v : r.path) {
      num += lambda[v];
      cmin = std::min(cmin, cap[v]);
    }
    if (!(cmin > 0.0))
      throw ZeroCapacity("analytic_travel_time: zero capacity on route");
    total += num / cmin;
  }
  return total;
}

double subnetwork_lambda_c(const Graph& g, std::span<const Route> routes,
                           double beta) {
  std::vector<NodeId> keep;
  for (const Route& r : routes)
    keep.insert(keep.end(), r.path.begin(), r.path.end());
  if (keep.empty()) throw EmptySubnetwork("subnetwork_lambda_c: no routes");
  const Graph sub = g.induced_subgraph(keep);

  int ncomp = 0;
  const auto comp = sub.components(&ncomp);
  double best = kInf;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < sub.node_count(); ++v)
      if (comp[v] == c) nodes.push_back(v);
    if (nodes.size() < 3) continue;
    const Graph part = sub.induced_subgraph(nodes);
    if (part.edge_count() == 0) continue;
    const auto bc = betweenness(part);
    const auto evc = eigenvector_centrality(part);
    best = std::min(best,
                    lambda_c_from(bc.raw, evc.values, beta, part.node_count()));
  }
  return best;
}

void write_traffic_header(std::ostream& os) {
  os << "model,strategy,N,seed,alpha,beta,lambda_total,cap_total,theta,"
        "mean_T,analytic_T,lambda_c_theory,lambda_c_sub\n";
}

void write_traffic_row(std::ostream& os, const std::string& model,
                       const std::string& strategy, int n, std::uint64_t seed,
                       const TrafficParams& params, const TrafficResult& r,
                       double lambda_c_theory, double lambda_c_sub) {
  os << model << "," << strategy << "," << n << "," << seed << ","
     << csv_double(params.alpha) << "," << csv_double(params.beta) << ","
     << csv_double(r.lambda_total) << "," << csv_double(r.cap_total) << ","
     << csv_double(r.theta) << "," << csv_double(r.mean_t) << ","
     << csv_double(r.analytic_t) << "," << csv_double(lambda_c_theory) << ","
     << csv_double(lambda_c_sub) << "\n";
}

}  // namespace tvcn
