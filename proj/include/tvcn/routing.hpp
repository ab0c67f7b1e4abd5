#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tvcn/graph.hpp"
#include "tvcn/rng.hpp"

namespace tvcn {

struct User {
  int id = 0;
  NodeId s = 0;
  NodeId d = 0;
};

enum class RouteStrategy { WG_MIN, WG_MAX, RANDOM_SP };

const char* to_string(RouteStrategy s);
RouteStrategy route_strategy_from_string(const std::string& s);

struct Route {
  User user;
  std::vector<NodeId> path;  // s..d inclusive
  double weight = 0.0;       // sum of bc_norm over path nodes
  std::uint64_t k_count = 0; // number of shortest paths for (s,d)
};

// Every shortest s-d path, enumerated from the BFS predecessor DAG in
// lexicographic node-sequence order. Throws Unreachable, and
// PathExplosion when the count exceeds cap.
std::vector<std::vector<NodeId>> all_shortest_paths(const Graph& g, NodeId s,
                                                    NodeId d,
                                                    std::uint64_t cap = 10000);

// Number of shortest s-d paths (no enumeration). Throws Unreachable.
std::uint64_t shortest_path_count(const Graph& g, NodeId s, NodeId d);

// W_g: sum of per-node betweenness over every node of the path, endpoints
// included.
double path_weight(std::span<const NodeId> path, std::span<const double> bc_norm);

// Chooses among the enumerated shortest paths: the argmin of W_g for
// WG_MIN, argmax for WG_MAX, uniform for RANDOM_SP. Equal-weight ties go
// to the lexicographically smallest node sequence.
Route select_route(const Graph& g, const User& user, RouteStrategy strategy,
                   std::span<const double> bc_norm, Rng& rng,
                   std::uint64_t cap = 10000);

// Same selection rule computed by dynamic programming on the shortest-path
// DAG; never enumerates, so large path multiplicities cannot overflow the
// cap. Used by the traffic simulator's route cache.
Route select_route_dag(const Graph& g, const User& user, RouteStrategy strategy,
                       std::span<const double> bc_norm, Rng& rng);

// R distinct (s,d) pairs drawn uniformly from the connected ordered pairs.
std::vector<User> sample_users(const Graph& g, int count, Rng& rng);

// CSV row format: user,s,d,strategy,path_len,k_count,w_g,path
// (path hyphen-joined).
void write_routes_header(std::ostream& os);
void write_route_row(std::ostream& os, const Route& r, RouteStrategy strategy);

}  // namespace tvcn
