#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvcn/graph.hpp"
#include "tvcn/rng.hpp"

namespace tvcn {

enum class GrowthModel { BA, TVCN, DTVCN };

const char* to_string(GrowthModel m);
GrowthModel growth_model_from_string(const std::string& s);

// Parameters for one network realization. Defaults give ~2 surviving new
// links per step for every model (BA: m_ba per step) so the three models
// are compared at equal density.
struct GrowthConfig {
  GrowthModel model = GrowthModel::BA;
  int n0 = 5;             // seed ring size
  int T = 195;            // growth steps; final node count is n0 + T
  int M = 5;              // per-step link budget (TVCN/DTVCN), M <= n0
  double vartheta = 0.6;  // fraction of M spent on new-node links, in (0,1)
  double gamma = 0.75;    // fraction of the alteration budget rewired, in (0.5,1]
  int m_ba = 2;           // links per new node in BA mode
  std::uint64_t rng_seed = 1;
  // Swap zeta_v and (1 - zeta_v) in the DTVCN selection probabilities.
  bool invert_zeta = false;

  void validate() const;  // throws InvalidConfig

  int links_per_new_node() const;  // floor(vartheta * M), or m_ba for BA
  int alteration_budget() const;   // floor((1 - vartheta) * M), 0 for BA
  int rewire_count() const;        // floor(gamma * (1 - vartheta) * M)
  int removal_count() const;       // alteration_budget() - rewire_count()
};

// Node-selection probabilities over the current node set.
struct AttachmentDistribution {
  std::vector<double> probs;
};

// Pi: degree-proportional selection.
AttachmentDistribution preferential(const Graph& g);

// Pi': favors low-degree nodes; probs[i] = (1 - k_i/sum k) / (|N|-1),
// which sums to 1 exactly.
AttachmentDistribution anti_preferential(const Graph& g);

// Pairwise degree correlation scaled from [-1,1] to [0,2]. The raw value
// is 2*min(k_v,k_n)/max(k_v,k_n) - 1: +1 for equal degrees, -> -1 for an
// extreme degree mismatch. Pluggable so alternate similarity measures can
// be tested against the same growth machinery.
double pair_degree_correlation(const Graph& g, NodeId v, NodeId n);
using CorrelationFn = double (*)(const Graph&, NodeId, NodeId);

// zeta_v = min_n r(v,n) / sum_n r(v,n) over neighbors n; in (0, 1].
double zeta(const Graph& g, NodeId v,
            CorrelationFn corr = pair_degree_correlation);

// Pi^r: probs proportional to k_v * zeta_v (or k_v * (1 - zeta_v) when
// inverted), renormalized to sum 1.
AttachmentDistribution dtvcn_attach(const Graph& g, bool invert_zeta = false,
                                    CorrelationFn corr = pair_degree_correlation);

// Pi^r': probs proportional to (1 - k_v/sum k) * (1 - zeta_v),
// renormalized. Throws DegenerateDistribution if every weight is zero
// (every zeta_v equal to 1). The invert_zeta flag is scoped to Pi^r and
// does not touch this distribution.
AttachmentDistribution dtvcn_remove_select(const Graph& g,
                                           CorrelationFn corr = pair_degree_correlation);

// One growth step: add a node with its new links, then apply the
// alteration budget (rewires, then removals). `t` is the step index,
// used only for diagnostics.
Graph grow_step(Graph g, const GrowthConfig& cfg, int t, Rng& rng);

// Seed ring on n0 nodes followed by T grow steps; snapshot t holds the
// graph after step t. Deterministic in cfg.rng_seed.
SnapshotSequence generate(const GrowthConfig& cfg);

// Convenience: final snapshot only.
Graph generate_final(const GrowthConfig& cfg);

}  // namespace tvcn
