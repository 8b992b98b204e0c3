#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bispec/bispectrum.hpp"
#include "bispec/estimator.hpp"
#include "bispec/stats.hpp"

namespace bispec {

/// Replicated-simulation experiment description.
struct ExperimentConfig {
  double amplitude = 1.0;
  double alpha = 5.0;
  double f_nl = 0.0;
  double r = 0.25;
  std::vector<int> L_list;
  int replications = 1000;
  std::uint64_t base_seed = 20240901ULL;
  enum class Route { pixel, harmonic };
  Route route = Route::pixel;
  int lambda_sim_factor = 2;   // Lambda_sim = factor * L
  double fnl_decay = 0.0;      // optional local-alternative schedule f_nl = c / L

  double f_nl_at(int L) const {
    return fnl_decay > 0.0 ? fnl_decay / static_cast<double>(L) : f_nl;
  }
  void validate() const;
};

/// Output of one batch of replications at a fixed L.
struct ReplicationSet {
  int L = 0;
  int L0 = 0;
  std::vector<MultipoleTriple> triples;
  std::vector<double> eta;
  double s_eta2 = 0.0;
  std::vector<double> fhat;              // one estimate per surviving replication
  std::vector<double> bhat;              // optional: reps x triples, row-major
  std::size_t n_failures = 0;
  double max_residual = 0.0;             // worst reality-constraint residual seen
};

/// R independent estimates, deterministic given (config, L) including across
/// thread counts: replication k always uses stream id k, results land in
/// per-index slots, and every reduction runs in fixed order afterwards.
/// Per-replication failures are recorded, not fatal, up to a 1% budget.
ReplicationSet run_replications(const ExperimentConfig& config, int L,
                                bool collect_bhat = false);

/// Log-log scaling fits across config.L_list:
///   variance_theory    (slope target alpha - 4)
///   variance_empirical (slope target alpha - 4)
///   cum4_over_var2     (slope target -4)
///   tv_bound_finite    (slope target -2)
struct ScalingStudy {
  std::vector<ScalingFit> fits;
  std::vector<std::string> warnings;
  std::vector<ReplicationSet> batches;  // per-L samples (bhat omitted)
};

ScalingStudy scaling_study(const ExperimentConfig& config);

}  // namespace bispec
