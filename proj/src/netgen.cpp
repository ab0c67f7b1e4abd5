#include "tvcn/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

namespace tvcn {

const char* to_string(GrowthModel m) {
  switch (m) {
    case GrowthModel::BA: return "BA";
    case GrowthModel::TVCN: return "TVCN";
    case GrowthModel::DTVCN: return "DTVCN";
  }
  return "?";
}

GrowthModel growth_model_from_string(const std::string& s) {
  if (s == "BA") return GrowthModel::BA;
  if (s == "TVCN") return GrowthModel::TVCN;
  if (s == "DTVCN") return GrowthModel::DTVCN;
  throw InvalidConfig("unknown growth model '" + s + "'");
}

namespace {

// Budgets are exact integers expressed through doubles (e.g. 0.6 * 5);
// nudge before flooring so representation error cannot drop a link.
int floor_budget(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

}  // namespace

void GrowthConfig::validate() const {
  if (n0 < 2) throw InvalidConfig("n0 must be >= 2");
  if (T < 0) throw InvalidConfig("T must be >= 0");
  if (model == GrowthModel::BA) {
    if (m_ba < 1) throw InvalidConfig("m_ba must be >= 1");
    if (m_ba > n0) throw InvalidConfig("m_ba must be <= n0");
    return;
  }
  if (M < 1) throw InvalidConfig("M must be >= 1");
  if (M > n0) throw InvalidConfig("M must be <= n0");
  if (!(vartheta > 0.0 && vartheta < 1.0))
    throw InvalidConfig("vartheta must lie in (0,1)");
  if (!(gamma > 0.5 && gamma <= 1.0))
    throw InvalidConfig("gamma must lie in (0.5,1]");
  if (links_per_new_node() < 1)
    throw InvalidConfig("floor(vartheta*M) must be >= 1");
}

int GrowthConfig::links_per_new_node() const {
  return model == GrowthModel::BA ? m_ba : floor_budget(vartheta * M);
}

int GrowthConfig::alteration_budget() const {
  return model == GrowthModel::BA ? 0 : floor_budget((1.0 - vartheta) * M);
}

int GrowthConfig::rewire_count() const {
  return model == GrowthModel::BA ? 0
                                  : floor_budget(gamma * (1.0 - vartheta) * M);
}

int GrowthConfig::removal_count() const {
  return alteration_budget() - rewire_count();
}

AttachmentDistribution preferential(const Graph& g) {
  const std::size_t ksum = g.degree_sum();
  if (ksum == 0) throw EmptyGraph("preferential: graph has no edges");
  AttachmentDistribution d;
  d.probs.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    d.probs[v] = static_cast<double>(g.degree(v)) / static_cast<double>(ksum);
  return d;
}

AttachmentDistribution anti_preferential(const Graph& g) {
  const int n = g.node_count();
  const std::size_t ksum = g.degree_sum();
  if (n < 2 || ksum == 0)
    throw EmptyGraph("anti_preferential: need >= 2 nodes and an edge");
  AttachmentDistribution d;
  d.probs.resize(n);
  for (NodeId v = 0; v < n; ++v)
    d.probs[v] = (1.0 - static_cast<double>(g.degree(v)) /
                            static_cast<double>(ksum)) /
                 static_cast<double>(n - 1);
  return d;
}

double pair_degree_correlation(const Graph& g, NodeId v, NodeId n) {
  if (v == n) throw Error("pair_degree_correlation: v == n");
  const int kv = g.degree(v);
  const int kn = g.degree(n);
  if (kv < 1 || kn < 1)
    throw IsolatedNode("pair_degree_correlation: isolated endpoint");
  const double lo = static_cast<double>(std::min(kv, kn));
  const double hi = static_cast<double>(std::max(kv, kn));
  // raw = 2*lo/hi - 1 in [-1,1]; return raw + 1.
  return 2.0 * lo / hi;
}

double zeta(const Graph& g, NodeId v, CorrelationFn corr) {
  const auto& nb = g.neighbors(v);
  if (nb.empty()) throw IsolatedNode("zeta: node has no neighbors");
  double lo = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (NodeId n : nb) {
    const double r = corr(g, v, n);
    lo = std::min(lo, r);
    sum += r;
  }
  if (!(sum > 0.0)) throw ZeroDenominator("zeta: correlations sum to zero");
  return lo / sum;
}

namespace {

// k_v * zeta_v weights (or k_v * (1-zeta_v) when inverted), unnormalized.
// A zero correlation denominator contributes weight 0.
std::vector<double> attach_weights(const Graph& g, bool invert_zeta,
                                   CorrelationFn corr) {
  std::vector<double> w(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const int kv = g.degree(v);
    if (kv < 1) continue;
    double z;
    try {
      z = zeta(g, v, corr);
    } catch (const ZeroDenominator&) {
      continue;
    }
    w[v] = kv * (invert_zeta ? 1.0 - z : z);
  }
  return w;
}

std::vector<double> remove_weights(const Graph& g, CorrelationFn corr) {
  const double ksum = static_cast<double>(g.degree_sum());
  std::vector<double> w(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const int kv = g.degree(v);
    if (kv < 1) continue;
    double z;
    try {
      z = zeta(g, v, corr);
    } catch (const ZeroDenominator&) {
      continue;
    }
    w[v] = (1.0 - kv / ksum) * (1.0 - z);
  }
  return w;
}

AttachmentDistribution normalized(std::vector<double> w, const char* what) {
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0))
    throw DegenerateDistribution(std::string(what) + ": all weights are zero");
  for (double& x : w) x /= total;
  return AttachmentDistribution{std::move(w)};
}

}  // namespace

AttachmentDistribution dtvcn_attach(const Graph& g, bool invert_zeta,
                                    CorrelationFn corr) {
  if (g.degree_sum() == 0) throw EmptyGraph("dtvcn_attach: graph has no edges");
  return normalized(attach_weights(g, invert_zeta, corr), "dtvcn_attach");
}

AttachmentDistribution dtvcn_remove_select(const Graph& g,
                                           CorrelationFn corr) {
  if (g.degree_sum() == 0)
    throw EmptyGraph("dtvcn_remove_select: graph has no edges");
  return normalized(remove_weights(g, corr), "dtvcn_remove_select");
}

namespace {

constexpr int kGuardAttempts = 10;

// TEMPORARY scan switches (removed after calibration).
int env_flag(const char* name, int dflt) {
  const char* v = std::getenv(name);
  return v ? std::atoi(v) : dflt;
}

std::vector<double> new_node_distribution(const Graph& g,
                                          const GrowthConfig& cfg) {
  if (cfg.model == GrowthModel::DTVCN) {
    try {
      return dtvcn_attach(g, cfg.invert_zeta).probs;
    } catch (const DegenerateDistribution&) {
      // All selection weights vanished (tiny graphs); degree-proportional
      // selection keeps the step feasible.
      return preferential(g).probs;
    }
  }
  return preferential(g).probs;
}

// Draw `count` distinct indices, zeroing each drawn weight (sequential
// draws without replacement).
std::vector<NodeId> draw_distinct(std::vector<double> weights, int count,
                                  Rng& rng) {
  std::vector<NodeId> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const std::size_t idx = rng.sample_index(weights);
    weights[idx] = 0.0;
    out.push_back(static_cast<NodeId>(idx));
  }
  return out;
}

// One end of a link is dropped from an anti-preferentially chosen node j;
// the surviving endpoint re-attaches to a preferentially chosen node.
void tvcn_rewire(Graph& g, Rng& rng) {
  const auto pref = preferential(g).probs;
  for (int attempt = 0; attempt < kGuardAttempts; ++attempt) {
    const auto pick = anti_preferential(g).probs;
    const NodeId j = static_cast<NodeId>(rng.sample_index(pick));
    const auto& nb = g.neighbors(j);
    if (nb.empty() || g.degree(j) < 2) continue;  // losing a link isolates j
    NodeId x;
    if (env_flag("TVCN_X_PREF", 0)) {
      std::vector<double> keep(nb.size());
      for (std::size_t i = 0; i < nb.size(); ++i) keep[i] = pref[nb[i]];
      x = nb[rng.sample_index(keep)];
    } else {
      x = nb[rng.uniform_int(0, static_cast<int>(nb.size()) - 1)];
    }

    auto target = pref;
    target[j] = 0.0;
    target[x] = 0.0;
    for (NodeId y : g.neighbors(x)) target[y] = 0.0;
    try {
      const NodeId u = static_cast<NodeId>(rng.sample_index(target));
      g.rewire_edge(x, j, u);
    } catch (const DegenerateDistribution&) {
      continue;  // x is already linked to every eligible node
    }
    return;
  }
}

void dtvcn_rewire(Graph& g, const GrowthConfig& cfg, Rng& rng) {
  for (int attempt = 0; attempt < kGuardAttempts; ++attempt) {
    // Ordered candidate (j,k): the link is assortative (scaled correlation
    // above 1) and cutting it at j leaves k with a neighbor. Candidates
    // are drawn proportionally to their correlation, so the most
    // assortative links are cut first.
    std::vector<std::pair<NodeId, NodeId>> candidates;
    std::vector<double> weight;
    for (auto [a, b] : g.edges()) {
      const double r = pair_degree_correlation(g, a, b);
      if (r <= 1.0) continue;
      if (g.degree(b) >= 2) {
        candidates.emplace_back(a, b);
        weight.push_back(r);
      }
      if (g.degree(a) >= 2) {
        candidates.emplace_back(b, a);
        weight.push_back(r);
      }
    }
    if (candidates.empty()) return;  // no link satisfies the rule

    const auto [j, k] = candidates[rng.sample_index(weight)];
    std::vector<double> target;
    try {
      target = dtvcn_attach(g, cfg.invert_zeta).probs;
    } catch (const DegenerateDistribution&) {
      return;
    }
    target[j] = 0.0;
    target[k] = 0.0;
    for (NodeId x : g.neighbors(j)) target[x] = 0.0;
    try {
      const NodeId u = static_cast<NodeId>(rng.sample_index(target));
      g.rewire_edge(j, k, u);
    } catch (const DegenerateDistribution&) {
      continue;
    }
    return;
  }
}

void remove_one(Graph& g, const GrowthConfig& cfg, Rng& rng) {
  std::vector<double> pick;
  if (cfg.model == GrowthModel::DTVCN) {
    try {
      pick = dtvcn_remove_select(g).probs;
    } catch (const DegenerateDistribution&) {
      return;  // every node has zero removal weight; forfeit the removal
    }
  } else {
    pick = anti_preferential(g).probs;
  }
  const bool is_dtvcn = cfg.model == GrowthModel::DTVCN;
  const int b_mode = env_flag(is_dtvcn ? "DTVCN_B_MODE" : "TVCN_B_MODE", 0);
  const auto anti = (!is_dtvcn && b_mode == 1) ? anti_preferential(g).probs
                                               : std::vector<double>{};
  for (int attempt = 0; attempt < kGuardAttempts; ++attempt) {
    const NodeId v = static_cast<NodeId>(rng.sample_index(pick));
    const auto& nb = g.neighbors(v);
    if (nb.empty() || g.degree(v) < 2) continue;  // would isolate v
    NodeId b;
    if (!is_dtvcn && b_mode == 1) {
      std::vector<double> w(nb.size());
      for (std::size_t i = 0; i < nb.size(); ++i) w[i] = anti[nb[i]];
      b = nb[rng.sample_index(w)];
    } else if (is_dtvcn && b_mode == 1) {
      // cut the disassortativity-carrying link of v
      std::vector<double> w(nb.size());
      for (std::size_t i = 0; i < nb.size(); ++i)
        w[i] = 2.0 - pair_degree_correlation(g, v, nb[i]);
      b = nb[rng.sample_index(w)];
    } else {
      b = nb[rng.uniform_int(0, static_cast<int>(nb.size()) - 1)];
    }
    if (g.degree(b) < 2) continue;  // would isolate b
    g.remove_edge(v, b);
    return;
  }
}

}  // namespace

Graph grow_step(Graph g, const GrowthConfig& cfg, int t, Rng& rng) {
  const int m = cfg.links_per_new_node();
  if (m >= g.node_count())
    throw BudgetInfeasible("step " + std::to_string(t) + ": " +
                           std::to_string(m) + " new links need more than " +
                           std::to_string(g.node_count()) + " nodes");

  const auto weights = new_node_distribution(g, cfg);
  const NodeId fresh = g.add_node();
  for (NodeId target : draw_distinct(weights, m, rng))
    g.add_edge(fresh, target);

  const int rewires = cfg.rewire_count();
  const int removals = cfg.removal_count();
  for (int i = 0; i < rewires; ++i) {
    if (cfg.model == GrowthModel::DTVCN)
      dtvcn_rewire(g, cfg, rng);
    else
      tvcn_rewire(g, rng);
  }
  for (int i = 0; i < removals; ++i) remove_one(g, cfg, rng);
  return g;
}

SnapshotSequence generate(const GrowthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  SnapshotSequence seq;
  seq.snapshots.reserve(cfg.T + 1);
  Graph g = Graph::ring(cfg.n0);
  seq.snapshots.push_back(g);
  for (int t = 1; t <= cfg.T; ++t) {
    g = grow_step(std::move(g), cfg, t, rng);
    seq.snapshots.push_back(g);
  }
  return seq;
}

Graph generate_final(const GrowthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  Graph g = Graph::ring(cfg.n0);
  for (int t = 1; t <= cfg.T; ++t) g = grow_step(std::move(g), cfg, t, rng);
  return g;
}

}  // namespace tvcn
