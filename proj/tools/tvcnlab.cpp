// tvcnlab: generate time-varying communication networks, compute their
// structural metrics, select betweenness-weighted routes, run the packet
// traffic simulation, and drive full experiment sweeps from JSON configs.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvcn/experiment.hpp"
#include "tvcn/metrics.hpp"
#include "tvcn/netgen.hpp"
#include "tvcn/routing.hpp"
#include "tvcn/traffic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tvcn;

namespace {

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "JSON config file")->required();
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--jobs", args.jobs, "worker threads");
}

int resolve_jobs(int cli_jobs) {
  if (const char* env = std::getenv("TVCNLAB_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (...) {
    }
    throw InvalidConfig("TVCNLAB_JOBS must be a positive integer");
  }
  return cli_jobs;
}

json load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidConfig("cannot open config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidConfig(path + ": parse error at line " +
                        std::to_string(line) + ", column " +
                        std::to_string(col) + ": " + e.what());
  }
}

void check_keys(const json& j, std::vector<std::string> keys) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw InvalidConfig("unknown config key '" + it.key() + "'");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("config field '") + key + "': " + e.what());
  }
}

const std::vector<std::string> kGrowthKeys = {
    "model", "n0", "T", "M", "vartheta", "gamma",
    "m_ba",  "seed", "invert_zeta", "edges_file"};

GrowthConfig growth_from_json(const json& j) {
  if (!j.contains("model")) throw InvalidConfig("config is missing 'model'");
  GrowthConfig cfg;
  cfg.model = growth_model_from_string(j.at("model").get<std::string>());
  cfg.n0 = get_or(j, "n0", cfg.n0);
  cfg.T = get_or(j, "T", cfg.T);
  cfg.M = get_or(j, "M", cfg.M);
  cfg.vartheta = get_or(j, "vartheta", cfg.vartheta);
  cfg.gamma = get_or(j, "gamma", cfg.gamma);
  cfg.m_ba = get_or(j, "m_ba", cfg.m_ba);
  cfg.rng_seed = get_or(j, "seed", cfg.rng_seed);
  cfg.invert_zeta = get_or(j, "invert_zeta", cfg.invert_zeta);
  cfg.validate();
  return cfg;
}

// Graph from an edge-list file, or generated from growth parameters.
struct LoadedGraph {
  Graph g;
  std::string model = "FILE";
  std::uint64_t seed = 0;
};

LoadedGraph graph_from_config(const json& j,
                              std::optional<std::uint64_t> seed_override) {
  LoadedGraph out;
  if (j.contains("edges_file")) {
    out.g = load_edge_list(j.at("edges_file").get<std::string>());
    return out;
  }
  GrowthConfig cfg = growth_from_json(j);
  if (seed_override) cfg.rng_seed = *seed_override;
  out.g = generate_final(cfg);
  out.model = to_string(cfg.model);
  out.seed = cfg.rng_seed;
  return out;
}

std::vector<std::string> with_keys(std::vector<std::string> base,
                                   const std::vector<std::string>& extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

int cmd_generate(const CommonArgs& args) {
  const json j = load_config(args.config);
  check_keys(j, kGrowthKeys);
  if (j.contains("edges_file"))
    throw InvalidConfig("generate needs growth parameters, not edges_file");
  GrowthConfig cfg = growth_from_json(j);
  if (args.seed) cfg.rng_seed = *args.seed;
  const SnapshotSequence seq = generate(cfg);
  fs::create_directories(args.out);
  for (int t = 0; t < seq.tau(); ++t)
    save_edge_list(seq.snapshots[t],
                   (fs::path(args.out) / ("snap_" + std::to_string(t) + ".edges"))
                       .string());
  const Graph& last = seq.snapshots.back();
  std::cout << "wrote " << seq.tau() << " snapshots to " << args.out
            << " (final N=" << last.node_count() << ", E=" << last.edge_count()
            << ")\n";
  return 0;
}

int cmd_metrics(const CommonArgs& args) {
  const json j = load_config(args.config);
  check_keys(j, with_keys(kGrowthKeys, {"stride"}));
  const int stride = get_or(j, "stride", 0);

  std::vector<std::pair<int, Graph>> rows;
  std::uint64_t rc_base = args.seed.value_or(1);
  if (j.contains("edges_file")) {
    rows.emplace_back(0, load_edge_list(j.at("edges_file").get<std::string>()));
  } else {
    GrowthConfig cfg = growth_from_json(j);
    if (args.seed) cfg.rng_seed = *args.seed;
    rc_base = cfg.rng_seed;
    if (stride > 0) {
      const SnapshotSequence seq = generate(cfg);
      for (int t = 0; t < seq.tau(); t += stride)
        rows.emplace_back(t, seq.snapshots[t]);
      if ((seq.tau() - 1) % stride != 0)
        rows.emplace_back(seq.tau() - 1, seq.snapshots.back());
    } else {
      rows.emplace_back(cfg.T, generate_final(cfg));
    }
  }

  fs::create_directories(args.out);
  const std::string path = (fs::path(args.out) / "metrics.csv").string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  write_metrics_header(os);
  for (const auto& [t, g] : rows) {
    if (g.node_count() < 3) continue;  // metrics undefined below 3 nodes
    write_metrics_row(os, t, compute_metrics(g, derive_seed(rc_base, 7000 + t)));
  }
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_routes(const CommonArgs& args) {
  const json j = load_config(args.config);
  check_keys(j, with_keys(kGrowthKeys, {"users", "strategies", "path_cap"}));

  const LoadedGraph loaded = graph_from_config(j, args.seed);
  const Graph g = loaded.g.largest_component();
  const int users_n = get_or(j, "users", 20);
  const std::uint64_t cap = get_or(j, "path_cap", std::uint64_t{10000});
  std::vector<RouteStrategy> strategies = {
      RouteStrategy::WG_MIN, RouteStrategy::RANDOM_SP, RouteStrategy::WG_MAX};
  if (j.contains("strategies")) {
    strategies.clear();
    for (const auto& s : j.at("strategies"))
      strategies.push_back(route_strategy_from_string(s.get<std::string>()));
  }

  const std::uint64_t seed = args.seed.value_or(loaded.seed ? loaded.seed : 1);
  const auto bc = betweenness(g);
  Rng user_rng(derive_seed(seed, 100));
  const auto users = sample_users(g, users_n, user_rng);

  fs::create_directories(args.out);
  const std::string path = (fs::path(args.out) / "routes.csv").string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  write_routes_header(os);
  for (const User& u : users)
    for (RouteStrategy st : strategies) {
      Rng route_rng(derive_seed(seed, 300 + u.id));
      write_route_row(os, select_route(g, u, st, bc.norm, route_rng, cap), st);
    }
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_traffic(const CommonArgs& args) {
  const json j = load_config(args.config);
  check_keys(j, with_keys(kGrowthKeys, {"users", "strategy", "alpha", "beta",
                                        "steps", "warmup", "window"}));

  const LoadedGraph loaded = graph_from_config(j, args.seed);
  const Graph g = loaded.g.largest_component();
  const int users_n = get_or(j, "users", 20);
  const RouteStrategy strategy =
      route_strategy_from_string(get_or<std::string>(j, "strategy", "WG_MIN"));
  TrafficParams params;
  params.alpha = get_or(j, "alpha", params.alpha);
  params.beta = get_or(j, "beta", params.beta);
  params.steps = get_or(j, "steps", params.steps);
  params.warmup = get_or(j, "warmup", params.warmup);
  params.window = get_or(j, "window", params.window);
  params.validate();

  const std::uint64_t seed = args.seed.value_or(loaded.seed ? loaded.seed : 1);
  const double lc_theory = lambda_c_theoretical(g, params.beta);

  TrafficResult result;
  double lc_sub = lc_theory;
  if (users_n > 0) {
    const auto bc = betweenness(g);
    Rng user_rng(derive_seed(seed, 100));
    const auto users = sample_users(g, users_n, user_rng);
    std::vector<Route> routes;
    Rng route_rng(derive_seed(seed, 200));
    for (const User& u : users)
      routes.push_back(select_route_dag(g, u, strategy, bc.norm, route_rng));
    Rng sim_rng(derive_seed(seed, 1000));
    result = simulate_users(g, routes, params, sim_rng);
    lc_sub = subnetwork_lambda_c(g, routes, params.beta);
  } else {
    Rng sim_rng(derive_seed(seed, 1000));
    result = simulate_global(g, strategy, params, sim_rng);
  }

  fs::create_directories(args.out);
  const std::string path = (fs::path(args.out) / "traffic.csv").string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  write_traffic_header(os);
  write_traffic_row(os, loaded.model, to_string(strategy), g.node_count(),
                    seed, params, result, lc_theory, lc_sub);
  std::cout << "wrote " << path << " (theta=" << result.theta
            << ", mean_T=" << result.mean_t << ")\n";
  return 0;
}

int cmd_experiment(const CommonArgs& args) {
  ExperimentSpec spec = ExperimentSpec::from_json_file(args.config);
  if (args.seed) spec.base_seed = *args.seed;
  RunOptions opts;
  opts.out_dir = args.out;
  opts.jobs = resolve_jobs(args.jobs);
  for (const std::string& path : run_experiment(spec, opts))
    std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying communication network traffic lab"};
  app.require_subcommand(1);

  CommonArgs gen_args, met_args, rou_args, tra_args, exp_args;
  CLI::App* gen = app.add_subcommand("generate", "grow a network, write snapshots");
  add_common(gen, gen_args);
  CLI::App* met = app.add_subcommand("metrics", "structural metrics CSV");
  add_common(met, met_args);
  CLI::App* rou = app.add_subcommand("routes", "user route selection CSV");
  add_common(rou, rou_args);
  CLI::App* tra = app.add_subcommand("traffic", "packet traffic simulation CSV");
  add_common(tra, tra_args);
  CLI::App* exp = app.add_subcommand("experiment", "config-driven experiment sweep");
  add_common(exp, exp_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (met->parsed()) return cmd_metrics(met_args);
    if (rou->parsed()) return cmd_routes(rou_args);
    if (tra->parsed()) return cmd_traffic(tra_args);
    if (exp->parsed()) return cmd_experiment(exp_args);
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
