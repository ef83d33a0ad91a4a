#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ssge/oracles.hpp"

namespace ssge {

using ScoreFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using LogDensityFn = std::function<double(const Eigen::VectorXd&)>;

struct HmcConfig {
  double step_lo = 0.01;
  double step_hi = 0.1;
  int leapfrog_lo = 1;
  int leapfrog_hi = 10;
  int n_iterations = 5000;
  std::uint64_t seed = 0;
};

struct HmcTrace {
  Eigen::MatrixXd states;          // n_iterations x d
  std::vector<bool> accepted;
  double acceptance_ratio;         // mean(accepted), initial state excluded
  int n_nonfinite;                 // proposals rejected for non-finite energy
};

// Symplectic leapfrog with the score as the negative potential gradient:
// half momentum kick, alternating full drifts and kicks, final half kick.
// Returns the final (position, momentum).
std::pair<Eigen::VectorXd, Eigen::VectorXd> leapfrog(
    const Eigen::VectorXd& position, const Eigen::VectorXd& momentum,
    const ScoreFn& score_fn, double step, int n_steps);

// One chain: per iteration a full standard-Gaussian momentum refresh, step
// size ~ U[step_lo, step_hi], leapfrog count ~ U{leapfrog_lo..leapfrog_hi},
// Metropolis-Hastings correction with H = -logp(x) + ||p||^2 / 2. Proposals
// with non-finite log density are rejected and counted in n_nonfinite.
HmcTrace hmc_chain(const Eigen::VectorXd& init, const ScoreFn& score_fn,
                   const LogDensityFn& logp_fn, const HmcConfig& config);

struct AcceptanceRow {
  std::string estimator;        // "true", "ssge", "stein_plus", "zero"
  double mean_acceptance;
  double std_acceptance;        // across repeats
  std::vector<double> ratios;   // per repeat
};

struct AcceptanceComparisonConfig {
  int fit_m = 200;
  double r_bar = 0.95;
  double eta = 0.001;
  HmcConfig hmc;
  int n_repeats = 10;
  bool with_ssge = true;
  bool with_stein_plus = true;
};

struct AcceptanceTable {
  std::vector<AcceptanceRow> rows;
  std::vector<HmcTrace> traces;  // row-major: rows x repeats
};

// The gradient-free sampling protocol: per repeat, estimators are fitted on
// a fresh sample set from the target, then chains driven by the true score,
// the estimated scores, and a zero-score control are run from a common
// random initial point with shared chain seeds. Dynamics use the (possibly
// estimated) score; the Metropolis correction always uses the oracle's
// unnormalized log density.
AcceptanceTable acceptance_comparison(const OracleDistribution& dist,
                                      const AcceptanceComparisonConfig& config,
                                      bool keep_traces = false);

}  // namespace ssge
