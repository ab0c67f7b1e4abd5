#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tvcn/graph.hpp"
#include "tvcn/rng.hpp"
#include "tvcn/routing.hpp"

namespace tvcn {

struct TrafficParams {
  double alpha = 0.01;  // generation-rate control
  double beta = 0.5;    // capacity control
  int steps = 5000;     // simulated steps
  int warmup = 1000;    // steps whose deliveries are excluded from <T>
  int window = 1000;    // trailing measurement window for theta
  void validate() const;
};

// C_i = beta * evc_i * N; sum over nodes is beta*N.
std::vector<double> node_capacity(std::span<const double> evc, double beta,
                                  int n);

// lambda_i = alpha * diameter * N * g_i / sum_j g_j. When every g_j is
// zero the load is spread uniformly (lambda_i = alpha * diameter), which
// keeps the sum identity intact.
std::vector<double> generation_rate(std::span<const double> bc_raw,
                                    double alpha, int diameter, int n);

// lambda_c = C_vmax * (N-1) / g_raw(vmax), with vmax the maximum-raw-BC
// node and C_vmax its capacity. +infinity when no node has positive BC.
double lambda_c_theoretical(const Graph& g, double beta);
double lambda_c_from(std::span<const double> bc_raw,
                     std::span<const double> evc, double beta, int n);

// The alpha at which the max-BC node's expected service demand (its own
// generation plus transit flow under uniform-destination random-SP
// traffic) reaches its capacity. This is the self-consistent congestion
// onset the order-parameter sweep is checked against.
double congestion_onset_alpha(const Graph& g, double beta);

// User-mode analogue: smallest alpha at which some route node's per-user
// capacity share is reached by its stream's generation rate. +infinity if
// no stream can congest.
double user_congestion_onset_alpha(const Graph& g,
                                   std::span<const Route> routes, double beta);

struct TrafficResult {
  double theta = 0.0;
  double mean_t = 0.0;      // NaN when nothing was delivered after warmup
  double analytic_t = 0.0;  // NaN in global mode
  double lambda_total = 0.0;
  double cap_total = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::vector<NodeId> congested;       // nodes with lambda_i > C_i
  std::vector<std::int64_t> p_trace;   // packets in network after each step
};

// Fixed-route simulation with explicit per-node rates/capacities: stream r
// draws Poisson(lambda[s_r]) packets per step which follow routes[r]; a
// node forwarding for u streams gives each sub-queue a C/u service share
// (fractional shares accumulate as credit).
TrafficResult simulate_routes(const Graph& g, std::span<const Route> routes,
                              std::span<const double> lambda,
                              std::span<const double> cap,
                              const TrafficParams& params, Rng& rng);

// User mode with Eq-derived rates and capacities; also fills analytic_t.
TrafficResult simulate_users(const Graph& g, std::span<const Route> routes,
                             const TrafficParams& params, Rng& rng);

// Global mode: every node generates Poisson(lambda_i) packets per step to
// uniform random reachable destinations, routed by `strategy` through a
// per-(s,d) route cache; single FIFO queue per node.
TrafficResult simulate_global(const Graph& g, RouteStrategy strategy,
                              const TrafficParams& params, Rng& rng);

// <T> = sum_r [ sum_{n in route} lambda_n / min_{n in route} C_n ].
double analytic_travel_time(std::span<const Route> routes,
                            std::span<const double> lambda,
                            std::span<const double> cap);

// lambda_c of the subgraph induced by the union of route nodes, metrics
// recomputed on that subgraph; disconnected unions score per component and
// the minimum is returned.
double subnetwork_lambda_c(const Graph& g, std::span<const Route> routes,
                           double beta);

// CSV row format:
// model,strategy,N,seed,alpha,beta,lambda_total,cap_total,theta,mean_T,
// analytic_T,lambda_c_theory,lambda_c_sub
void write_traffic_header(std::ostream& os);
void write_traffic_row(std::ostream& os, const std::string& model,
                       const std::string& strategy, int n, std::uint64_t seed,
                       const TrafficParams& params, const TrafficResult& r,
                       double lambda_c_theory, double lambda_c_sub);

}  // namespace tvcn
