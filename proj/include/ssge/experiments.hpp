#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssge/hmc.hpp"
#include "ssge/oracles.hpp"
#include "ssge/score.hpp"

namespace ssge {

Eigen::VectorXd grid_linspace(double lo, double hi, int n);

// Riemann approximation of integral |est - truth|^2 q dx on a uniform grid:
// dx * sum_n q(x_n) * ||est_n - truth_n||^2.
double weighted_mse(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth,
                    const Eigen::VectorXd& density, double dx);

// Plain mean squared error over the rows selected by the mask.
double masked_mse(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth,
                  const std::vector<bool>& mask);

struct Grid1d {
  double lo = -4.0;
  double hi = 4.0;
  int n = 201;
};

// One seed of the 1-D comparison protocol: fit on m draws, evaluate the
// spectral estimator and the augmented Stein baseline on the grid.
struct GridEvaluation {
  Eigen::VectorXd x;            // grid
  Eigen::MatrixXd true_score;   // n x 1
  Eigen::MatrixXd ssge;         // n x 1
  Eigen::MatrixXd stein_plus;   // n x 1
  Eigen::VectorXd density;      // normalized q on the grid (up to constant)
  double dx;
  SampleMatrix samples;
  Eigen::MatrixXd stein_at_samples;  // m x 1, plain ridge fit at the samples
  // Diagnostics of the spectral fit.
  int j_selected;
  double sigma_used;
  Eigen::VectorXd eigvals;
  double mu_j;
  double delta_j;
};

GridEvaluation evaluate_on_grid(const OracleDistribution& dist, int m,
                                std::uint64_t seed, const FitConfig& fit_config,
                                double eta, const Grid1d& grid);

// Weighted grid error of a single spectral fit (no baseline), used by the
// M- and J-sweeps.
struct SweepCell {
  std::string target;
  int m;
  int j;          // effective selected rank
  std::uint64_t seed;
  double weighted_mse;
  double mu_j;
  double delta_j;
};

SweepCell sweep_cell(const OracleDistribution& dist, int m, std::uint64_t seed,
                     const FitConfig& fit_config, const Grid1d& grid);

// All cells of a sweep in configuration order (m-major, then rank, then
// seed); cells evaluate in parallel.
std::vector<SweepCell> run_sweep(const OracleDistribution& dist,
                                 const std::vector<int>& m_list,
                                 const std::vector<RankRule>& rank_list,
                                 const std::vector<std::uint64_t>& seeds,
                                 std::optional<double> sigma,
                                 const Grid1d& grid);

// Entropy-gradient demo for the d-D location-scale family.
struct EntropyDemoResult {
  Eigen::VectorXd phi;        // [mu, s]
  Eigen::VectorXd estimate;   // mean over seeds
  Eigen::VectorXd std_error;  // std across seeds / sqrt(n_seeds)
  Eigen::VectorXd analytic;   // [0.., 1/s..]
  Eigen::VectorXd abs_error;
};

EntropyDemoResult entropy_demo(const Eigen::VectorXd& mu,
                               const Eigen::VectorXd& s, int n_noise,
                               int n_seeds, std::uint64_t seed,
                               const FitConfig& fit_config);

// Variant driven by the analytic score of the matching Gaussian instead of
// the fitted estimator; calibration reference for the demo's tolerances.
EntropyDemoResult entropy_demo_true_score(const Eigen::VectorXd& mu,
                                          const Eigen::VectorXd& s,
                                          int n_noise, int n_seeds,
                                          std::uint64_t seed);

}  // namespace ssge
