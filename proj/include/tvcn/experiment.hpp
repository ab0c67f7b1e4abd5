#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvcn/netgen.hpp"
#include "tvcn/routing.hpp"

namespace tvcn {

enum class ExperimentKind {
  LAMBDA_C_VS_BETA,
  THETA_VS_LAMBDA,
  T_VS_LAMBDA,
  STRUCTURE_VS_N,
  DEMO_ROUTES,
};

const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

// Config-driven experiment description; see README for the JSON schema.
struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::STRUCTURE_VS_N;
  std::vector<GrowthModel> models = {GrowthModel::BA, GrowthModel::TVCN,
                                     GrowthModel::DTVCN};
  std::vector<RouteStrategy> strategies = {RouteStrategy::WG_MIN,
                                           RouteStrategy::RANDOM_SP,
                                           RouteStrategy::WG_MAX};
  std::vector<int> sizes = {200, 400, 600, 800, 1000};
  std::vector<double> betas = {0.3, 0.4, 0.5, 0.6, 0.7};
  // Interpreted as absolute alpha values, or as multiples of the measured
  // congestion-onset alpha when alphas_scale_onset is set.
  std::vector<double> alphas = {1.5, 2.5};
  bool alphas_scale_onset = true;
  int realizations = 10;
  int users = 20;
  std::uint64_t base_seed = 1;

  // Growth parameter pack shared by all models.
  int n0 = 5;
  int M = 5;
  int m_ba = 2;
  double vartheta = 0.6;
  double gamma = 0.75;
  bool invert_zeta = true;

  // Traffic run lengths.
  int steps = 5000;
  int warmup = 1000;
  int window = 1000;

  void validate() const;  // throws InvalidConfig
  static ExperimentSpec from_json_text(const std::string& text);
  static ExperimentSpec from_json_file(const std::string& path);

  GrowthConfig growth_config(GrowthModel model, int size,
                             std::uint64_t seed) const;
};

struct RunOptions {
  std::string out_dir = ".";
  int jobs = 1;
};

// Runs the experiment, writes its CSV outputs under out_dir, and returns
// the written paths. Byte-identical for identical (spec, out contents);
// realization seeds are base_seed + realization index.
std::vector<std::string> run_experiment(const ExperimentSpec& spec,
                                        const RunOptions& opts);

}  // namespace tvcn
