#include "tvcn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tvcn/csv.hpp"
#include "tvcn/metrics.hpp"
#include "tvcn/parallel.hpp"
#include "tvcn/traffic.hpp"

namespace tvcn {

using nlohmann::json;

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::LAMBDA_C_VS_BETA: return "LAMBDA_C_VS_BETA";
    case ExperimentKind::THETA_VS_LAMBDA: return "THETA_VS_LAMBDA";
    case ExperimentKind::T_VS_LAMBDA: return "T_VS_LAMBDA";
    case ExperimentKind::STRUCTURE_VS_N: return "STRUCTURE_VS_N";
    case ExperimentKind::DEMO_ROUTES: return "DEMO_ROUTES";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "LAMBDA_C_VS_BETA") return ExperimentKind::LAMBDA_C_VS_BETA;
  if (s == "THETA_VS_LAMBDA") return ExperimentKind::THETA_VS_LAMBDA;
  if (s == "T_VS_LAMBDA") return ExperimentKind::T_VS_LAMBDA;
  if (s == "STRUCTURE_VS_N") return ExperimentKind::STRUCTURE_VS_N;
  if (s == "DEMO_ROUTES") return ExperimentKind::DEMO_ROUTES;
  throw InvalidConfig("unknown experiment '" + s + "'");
}

void ExperimentSpec::validate() const {
  if (realizations < 1) throw InvalidConfig("realizations must be >= 1");
  if (users < 1) throw InvalidConfig("users must be >= 1");
  if (models.empty()) throw InvalidConfig("models must be non-empty");
  if (sizes.empty()) throw InvalidConfig("sizes must be non-empty");
  if (betas.empty()) throw InvalidConfig("betas must be non-empty");
  if (alphas.empty()) throw InvalidConfig("alphas must be non-empty");
  if (strategies.empty()) throw InvalidConfig("strategies must be non-empty");
  for (int s : sizes)
    if (s <= n0) throw InvalidConfig("every size must exceed n0");
  for (double b : betas)
    if (!(b > 0.0)) throw InvalidConfig("betas must be > 0");
  for (double a : alphas)
    if (!(a > 0.0)) throw InvalidConfig("alphas must be > 0");
  for (GrowthModel m : models)
    growth_config(m, sizes.front(), base_seed).validate();
  TrafficParams probe;
  probe.steps = steps;
  probe.warmup = warmup;
  probe.window = window;
  probe.validate();
}

GrowthConfig ExperimentSpec::growth_config(GrowthModel model, int size,
                                           std::uint64_t seed) const {
  GrowthConfig cfg;
  cfg.model = model;
  cfg.n0 = n0;
  cfg.T = size - n0;
  cfg.M = M;
  cfg.vartheta = vartheta;
  cfg.gamma = gamma;
  cfg.m_ba = m_ba;
  cfg.rng_seed = seed;
  cfg.invert_zeta = invert_zeta;
  return cfg;
}

namespace {

std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_config(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig("config parse error at " + line_of(text, e.byte) +
                        ": " + e.what());
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("config field '") + key + "': " + e.what());
  }
}

void check_known_keys(const json& j, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) {
          return key == k;
        }) == keys.end())
      throw InvalidConfig("unknown config key '" + key + "'");
  }
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json_text(const std::string& text) {
  const json j = parse_config(text);
  check_known_keys(
      j, {"experiment", "models", "strategies", "sizes", "betas", "alphas",
          "alphas_scale_onset", "realizations", "users", "base_seed", "n0",
          "M", "m_ba", "vartheta", "gamma", "invert_zeta", "steps", "warmup",
          "window"});
  ExperimentSpec spec;
  if (!j.contains("experiment"))
    throw InvalidConfig("config is missing 'experiment'");
  spec.experiment =
      experiment_kind_from_string(j.at("experiment").get<std::string>());
  if (j.contains("models")) {
    spec.models.clear();
    for (const auto& m : j.at("models"))
      spec.models.push_back(growth_model_from_string(m.get<std::string>()));
  }
  if (j.contains("strategies")) {
    spec.strategies.clear();
    for (const auto& s : j.at("strategies"))
      spec.strategies.push_back(
          route_strategy_from_string(s.get<std::string>()));
  }
  read_field(j, "sizes", spec.sizes);
  read_field(j, "betas", spec.betas);
  read_field(j, "alphas", spec.alphas);
  read_field(j, "alphas_scale_onset", spec.alphas_scale_onset);
  read_field(j, "realizations", spec.realizations);
  read_field(j, "users", spec.users);
  read_field(j, "base_seed", spec.base_seed);
  read_field(j, "n0", spec.n0);
  read_field(j, "M", spec.M);
  read_field(j, "m_ba", spec.m_ba);
  read_field(j, "vartheta", spec.vartheta);
  read_field(j, "gamma", spec.gamma);
  read_field(j, "invert_zeta", spec.invert_zeta);
  read_field(j, "steps", spec.steps);
  read_field(j, "warmup", spec.warmup);
  read_field(j, "window", spec.window);
  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidConfig("cannot open config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_json_text(buf.str());
}

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Stat {
  std::vector<double> xs;
  void add(double x) { xs.push_back(x); }
  double mean() const {
    if (xs.empty()) return kNaN;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  }
  double sdev() const {
    if (xs.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
  }
};

std::string out_path(const RunOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  return os;
}

// Per-realization network with its metrics.
struct PreparedNet {
  Graph net;
  BetweennessResult bc;
  std::vector<double> evc;
  int diameter = 0;
};

PreparedNet prepare_net(const ExperimentSpec& spec, GrowthModel model,
                        int size, std::uint64_t seed) {
  PreparedNet p;
  // Growth keeps graphs connected in all but rare removal corner cases;
  // metrics and traffic run on the largest component.
  p.net = generate_final(spec.growth_config(model, size, seed))
              .largest_component();
  p.bc = betweenness(p.net);
  p.evc = eigenvector_centrality(p.net).values;
  p.diameter = apl_diameter(p.net).diameter;
  return p;
}

struct SweepCellResult {
  double alpha = kNaN;
  double lambda_total = kNaN;
  double theta = kNaN;
  double mean_t = kNaN;
  double analytic_t = kNaN;
};

// THETA_VS_LAMBDA / T_VS_LAMBDA sweep shared pipeline. Cells are indexed
// [model][strategy][alpha].
using RealizationSweep = std::vector<std::vector<std::vector<SweepCellResult>>>;

RealizationSweep run_sweep_realization(const ExperimentSpec& spec,
                                       std::size_t realization) {
  const std::uint64_t seed = spec.base_seed + realization;
  const int size = spec.sizes.front();
  const double beta = spec.betas.front();

  const std::size_t nm = spec.models.size();
  const std::size_t ns = spec.strategies.size();
  const std::size_t na = spec.alphas.size();

  std::vector<PreparedNet> nets;
  std::vector<std::vector<std::vector<Route>>> routes(nm);
  double onset_scale = 0.0;
  for (std::size_t mi = 0; mi < nm; ++mi) {
    nets.push_back(prepare_net(spec, spec.models[mi], size, seed));
    const PreparedNet& p = nets.back();
    Rng user_rng(derive_seed(seed, 100 + mi));
    const auto users = sample_users(p.net, spec.users, user_rng);
    routes[mi].resize(ns);
    for (std::size_t si = 0; si < ns; ++si) {
      Rng route_rng(derive_seed(seed, 200 + mi * 16 + si));
      for (const User& u : users)
        routes[mi][si].push_back(select_route_dag(
            p.net, u, spec.strategies[si], p.bc.norm, route_rng));
      const double onset =
          user_congestion_onset_alpha(p.net, routes[mi][si], beta);
      if (std::isfinite(onset)) onset_scale = std::max(onset_scale, onset);
    }
  }
  if (!(onset_scale > 0.0)) onset_scale = 1.0;

  RealizationSweep out(nm);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    const PreparedNet& p = nets[mi];
    const int n = p.net.node_count();
    const auto lambda_hat = generation_rate(p.bc.raw, 1.0, p.diameter, n);
    const auto cap = node_capacity(p.evc, beta, n);
    out[mi].resize(ns);
    for (std::size_t si = 0; si < ns; ++si) {
      out[mi][si].resize(na);
      for (std::size_t ai = 0; ai < na; ++ai) {
        const double alpha =
            spec.alphas_scale_onset ? spec.alphas[ai] * onset_scale
                                    : spec.alphas[ai];
        std::vector<double> lambda(lambda_hat);
        for (double& l : lambda) l *= alpha;
        TrafficParams params;
        params.alpha = alpha;
        params.beta = beta;
        params.steps = spec.steps;
        params.warmup = spec.warmup;
        params.window = spec.window;
        Rng sim_rng(derive_seed(seed, 1000 + (mi * 16 + si) * 64 + ai));
        TrafficResult r =
            simulate_routes(p.net, routes[mi][si], lambda, cap, params, sim_rng);
        SweepCellResult& cell = out[mi][si][ai];
        cell.alpha = alpha;
        cell.lambda_total = r.lambda_total;
        cell.theta = r.theta;
        cell.mean_t = r.mean_t;
        cell.analytic_t = analytic_travel_time(routes[mi][si], lambda, cap);
      }
    }
  }
  return out;
}

std::vector<std::string> run_sweep(const ExperimentSpec& spec,
                                   const RunOptions& opts) {
  std::vector<RealizationSweep> results(spec.realizations);
  parallel_for(spec.realizations, opts.jobs, [&](std::size_t i) {
    results[i] = run_sweep_realization(spec, i);
  });

  const bool theta_kind = spec.experiment == ExperimentKind::THETA_VS_LAMBDA;
  const std::string name =
      theta_kind ? "theta_vs_lambda.csv" : "t_vs_lambda.csv";
  const std::string path = out_path(opts, name);
  std::ofstream os = open_out(path);
  if (theta_kind)
    os << "model,strategy,N,beta,alpha_spec,alpha_mean,lambda_total_mean,"
          "theta_mean,theta_std,realizations\n";
  else
    os << "model,strategy,N,beta,alpha_spec,alpha_mean,lambda_total_mean,"
          "mean_T_mean,mean_T_std,analytic_T_mean,analytic_T_std,"
          "realizations\n";

  for (std::size_t mi = 0; mi < spec.models.size(); ++mi)
    for (std::size_t si = 0; si < spec.strategies.size(); ++si)
      for (std::size_t ai = 0; ai < spec.alphas.size(); ++ai) {
        Stat alpha, lambda_total, theta, mean_t, analytic_t;
        for (const auto& r : results) {
          const SweepCellResult& c = r[mi][si][ai];
          alpha.add(c.alpha);
          lambda_total.add(c.lambda_total);
          theta.add(c.theta);
          mean_t.add(c.mean_t);
          analytic_t.add(c.analytic_t);
        }
        os << to_string(spec.models[mi]) << ","
           << to_string(spec.strategies[si]) << "," << spec.sizes.front()
           << "," << csv_double(spec.betas.front()) << ","
           << csv_double(spec.alphas[ai]) << "," << csv_double(alpha.mean())
           << "," << csv_double(lambda_total.mean()) << ",";
        if (theta_kind)
          os << csv_double(theta.mean()) << "," << csv_double(theta.sdev())
             << "," << spec.realizations << "\n";
        else
          os << csv_double(mean_t.mean()) << "," << csv_double(mean_t.sdev())
             << "," << csv_double(analytic_t.mean()) << ","
             << csv_double(analytic_t.sdev()) << "," << spec.realizations
             << "\n";
      }
  return {path};
}

std::vector<std::string> run_structure(const ExperimentSpec& spec,
                                       const RunOptions& opts) {
  const std::size_t nm = spec.models.size();
  const std::size_t nn = spec.sizes.size();
  const std::size_t tasks = nm * nn * spec.realizations;
  std::vector<MetricsReport> reports(tasks);
  parallel_for(tasks, opts.jobs, [&](std::size_t t) {
    const std::size_t mi = t / (nn * spec.realizations);
    const std::size_t ni = (t / spec.realizations) % nn;
    const std::size_t ri = t % spec.realizations;
    const std::uint64_t seed = spec.base_seed + ri;
    const Graph net =
        generate_final(
            spec.growth_config(spec.models[mi], spec.sizes[ni], seed))
            .largest_component();
    reports[t] = compute_metrics(net, derive_seed(seed, 7000 + t));
  });

  const std::string path = out_path(opts, "structure_vs_n.csv");
  std::ofstream os = open_out(path);
  os << "N,model,realizations,g_max_norm_mean,g_max_norm_std,apl_mean,apl_std,"
        "rc_mean,rc_std,clc_mean,clc_std\n";
  for (std::size_t ni = 0; ni < nn; ++ni)
    for (std::size_t mi = 0; mi < nm; ++mi) {
      Stat gmax, apl, rc, clc;
      for (int ri = 0; ri < spec.realizations; ++ri) {
        const MetricsReport& r =
            reports[(mi * nn + ni) * spec.realizations + ri];
        gmax.add(r.g_max_norm);
        apl.add(r.apl);
        rc.add(r.rc);
        clc.add(r.clc);
      }
      os << spec.sizes[ni] << "," << to_string(spec.models[mi]) << ","
         << spec.realizations << "," << csv_double(gmax.mean()) << ","
         << csv_double(gmax.sdev()) << "," << csv_double(apl.mean()) << ","
         << csv_double(apl.sdev()) << "," << csv_double(rc.mean()) << ","
         << csv_double(rc.sdev()) << "," << csv_double(clc.mean()) << ","
         << csv_double(clc.sdev()) << "\n";
    }
  return {path};
}

std::vector<std::string> run_lambda_c(const ExperimentSpec& spec,
                                      const RunOptions& opts) {
  const std::size_t nm = spec.models.size();
  const std::size_t nb = spec.betas.size();
  const int size = spec.sizes.front();
  // lambda_c values indexed [model][beta][realization]
  std::vector<std::vector<std::vector<double>>> lc(
      nm, std::vector<std::vector<double>>(
              nb, std::vector<double>(spec.realizations)));
  const std::size_t tasks = nm * spec.realizations;
  parallel_for(tasks, opts.jobs, [&](std::size_t t) {
    const std::size_t mi = t / spec.realizations;
    const std::size_t ri = t % spec.realizations;
    const PreparedNet p =
        prepare_net(spec, spec.models[mi], size, spec.base_seed + ri);
    for (std::size_t bi = 0; bi < nb; ++bi)
      lc[mi][bi][ri] = lambda_c_from(p.bc.raw, p.evc, spec.betas[bi],
                                     p.net.node_count());
  });

  const std::string path = out_path(opts, "lambda_c_vs_beta.csv");
  std::ofstream os = open_out(path);
  os << "model,beta,N,realizations,lambda_c_mean,lambda_c_std\n";
  for (std::size_t mi = 0; mi < nm; ++mi)
    for (std::size_t bi = 0; bi < nb; ++bi) {
      Stat s;
      for (double v : lc[mi][bi]) s.add(v);
      os << to_string(spec.models[mi]) << "," << csv_double(spec.betas[bi])
         << "," << size << "," << spec.realizations << ","
         << csv_double(s.mean()) << "," << csv_double(s.sdev()) << "\n";
    }
  return {path};
}

std::vector<std::string> run_demo_routes(const ExperimentSpec& spec,
                                         const RunOptions& opts) {
  GrowthConfig cfg = spec.growth_config(GrowthModel::BA, spec.sizes.front(),
                                        spec.base_seed);
  const Graph net = generate_final(cfg).largest_component();
  const auto bc = betweenness(net);
  Rng user_rng(derive_seed(spec.base_seed, 100));
  const auto users = sample_users(net, spec.users, user_rng);

  const std::string path = out_path(opts, "demo_routes.csv");
  std::ofstream os = open_out(path);
  write_routes_header(os);
  for (const User& u : users) {
    for (RouteStrategy st : {RouteStrategy::WG_MAX, RouteStrategy::RANDOM_SP,
                             RouteStrategy::WG_MIN}) {
      Rng route_rng(derive_seed(spec.base_seed, 300 + u.id));
      const Route r = select_route(net, u, st, bc.norm, route_rng);
      write_route_row(os, r, st);
    }
  }
  return {path};
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentSpec& spec,
                                        const RunOptions& opts) {
  spec.validate();
  switch (spec.experiment) {
    case ExperimentKind::LAMBDA_C_VS_BETA: return run_lambda_c(spec, opts);
    case ExperimentKind::THETA_VS_LAMBDA:
    case ExperimentKind::T_VS_LAMBDA: return run_sweep(spec, opts);
    case ExperimentKind::STRUCTURE_VS_N: return run_structure(spec, opts);
    case ExperimentKind::DEMO_ROUTES: return run_demo_routes(spec, opts);
  }
  throw Error("unhandled experiment kind");
}

}  // namespace tvcn
