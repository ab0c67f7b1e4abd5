#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tvcn/graph.hpp"

namespace tvcn {

struct BetweennessResult {
  // raw[v] = sum over unordered pairs (s,d), s,d != v, of
  // sigma_sd(v)/sigma_sd; norm[v] = raw[v] * 2/((N-1)(N-2)).
  std::vector<double> raw;
  std::vector<double> norm;
};

// Brandes accumulation over unweighted BFS; disconnected graphs are
// handled per component. Throws TooSmall for N < 3.
BetweennessResult betweenness(const Graph& g);

// sum_s weight[s] * delta_s(v), where delta_s(v) = sum_d sigma_sd(v)/sigma_sd
// is the expected number of transits of v by one packet from s to a uniformly
// random destination, times (N-1). Used for congestion-onset estimates.
std::vector<double> weighted_dependencies(const Graph& g,
                                          std::span<const double> weight);

struct EvcResult {
  std::vector<double> values;  // >= 0, sums to 1
  int iterations = 0;
  bool converged = false;
};

// Dominant adjacency eigenvector by power iteration, sum-normalized.
// Switches to a damped half-step if a period-2 oscillation is detected
// (bipartite graphs). Throws NoConvergence after max_iter.
EvcResult eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                 int max_iter = 10000);

// Mean over all nodes of 2*tri(v)/(k_v(k_v-1)); nodes with k_v < 2
// contribute 0.
double clustering_coefficient(const Graph& g);

struct PathStats {
  double apl = 0.0;  // mean distance over unordered connected pairs
  int diameter = 0;  // max finite distance
};
PathStats apl_diameter(const Graph& g);

// Density of links among nodes with degree > k:
// phi(k) = 2 E_{>k} / (N_{>k} (N_{>k}-1)). Throws UndefinedThreshold if
// fewer than two nodes qualify.
double rich_club_phi(const Graph& g, int k);

// phi(k) for k = 0..max degree-1; entries where fewer than two nodes
// qualify are NaN.
std::vector<double> rich_club_profile(const Graph& g);

struct RichClubResult {
  int k_star = 0;        // ceil(mean degree)
  double phi = 0.0;      // phi(k_star)
  double phi_rand = 0.0; // mean phi(k_star) over randomized graphs
  double rc = 0.0;       // phi / phi_rand
};

// Normalized rich-club coefficient at k* = ceil(<k>): phi(k*) divided by
// its mean over `randomizations` degree-preserving edge-swap null models.
RichClubResult rich_club(const Graph& g, std::uint64_t null_seed,
                         int randomizations = 10);

// Degree-preserving double-edge-swap randomization (Maslov-Sneppen);
// attempts ~ swaps_per_edge * E.
Graph degree_preserving_randomization(const Graph& g, std::uint64_t seed,
                                      int swaps_per_edge = 10);

// Newman's global degree assortativity: Pearson correlation of degrees
// over the 2E (both orientations) edge endpoint list. Returns NaN when the
// endpoint degree variance is zero (regular graphs).
double assortativity(const Graph& g);

struct MetricsReport {
  int n = 0;
  std::size_t e = 0;
  double g_max_norm = 0.0;
  double apl = 0.0;
  int diameter = 0;
  double rc = 0.0;  // NaN when the rich-club threshold is undefined
  double clc = 0.0;
  double assort = 0.0;  // NaN for degenerate degree variance
};

MetricsReport compute_metrics(const Graph& g, std::uint64_t rc_seed);

// CSV row format: t,N,E,g_max_norm,apl,diameter,rc,clc,assortativity
void write_metrics_header(std::ostream& os);
void write_metrics_row(std::ostream& os, int t, const MetricsReport& r);

}  // namespace tvcn
