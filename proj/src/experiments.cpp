#include "ssge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssge/entropy.hpp"
#include "ssge/parallel.hpp"
#include "ssge/rng.hpp"
#include "ssge/stein.hpp"

namespace ssge {

Eigen::VectorXd grid_linspace(double lo, double hi, int n) {
  if (n < 2 || !(lo < hi)) {
    throw std::invalid_argument("grid needs n >= 2 and lo < hi");
  }
  Eigen::VectorXd out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  return out;
}

double weighted_mse(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth,
                    const Eigen::VectorXd& density, double dx) {
  double acc = 0.0;
  for (Eigen::Index r = 0; r < est.rows(); ++r) {
    acc += density[r] * (est.row(r) - truth.row(r)).squaredNorm();
  }
  return acc * dx;
}

double masked_mse(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth,
                  const std::vector<bool>& mask) {
  double acc = 0.0;
  int count = 0;
  for (Eigen::Index r = 0; r < est.rows(); ++r) {
    if (!mask[static_cast<std::size_t>(r)]) continue;
    acc += (est.row(r) - truth.row(r)).squaredNorm();
    ++count;
  }
  return count > 0 ? acc / count : 0.0;
}

namespace {

// Normal densities on the grid from the unnormalized log density; the
// normalizer drops out of every comparison but keeps magnitudes readable.
Eigen::VectorXd grid_density(const OracleDistribution& dist,
                             const Eigen::VectorXd& x) {
  Eigen::MatrixXd points(x.size(), 1);
  points.col(0) = x;
  const Eigen::VectorXd logq = dist.log_density_unnormalized(points);
  Eigen::VectorXd q = (logq.array() - logq.maxCoeff()).exp();
  // Unit-mass normalization over the real line via the grid quadrature.
  const double dx = x[1] - x[0];
  const double mass = q.sum() * dx;
  return q / mass;
}

double min_retained_gap(const Eigen::VectorXd& eigvals_full, int j, int m) {
  // Delta_J = min_{j' <= J} (mu_j' - mu_j'+1), with mu past the spectrum = 0.
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < j; ++i) {
    const double next =
        (i + 1 < eigvals_full.size()) ? eigvals_full[i + 1] : 0.0;
    gap = std::min(gap, (eigvals_full[i] - std::max(next, 0.0)) / m);
  }
  return gap;
}

}  // namespace

GridEvaluation evaluate_on_grid(const OracleDistribution& dist, int m,
                                std::uint64_t seed, const FitConfig& fit_config,
                                double eta, const Grid1d& grid) {
  if (dist.dim() != 1) {
    throw std::invalid_argument("grid evaluation is 1-D only");
  }
  GridEvaluation out;
  out.x = grid_linspace(grid.lo, grid.hi, grid.n);
  out.dx = out.x[1] - out.x[0];
  Eigen::MatrixXd points(grid.n, 1);
  points.col(0) = out.x;

  out.samples = dist.sample(m, seed);
  out.true_score = dist.true_score(points);
  out.density = grid_density(dist, out.x);

  // Spectral estimator. The full spectrum is recomputed for the gap
  // diagnostic; build_basis truncates it.
  const ScoreEstimator estimator = fit(out.samples, fit_config);
  out.ssge = score(estimator, points);
  out.j_selected = estimator.basis.j_rank;
  out.sigma_used = estimator.basis.sigma.sigma();
  out.eigvals = estimator.basis.eigvals;
  out.mu_j = estimator.basis.mu[out.j_selected - 1];
  {
    const EigenSystem full = eigendecompose(
        gram_matrix(out.samples, estimator.basis.sigma));
    out.delta_j = min_retained_gap(full.eigvals, out.j_selected, m);
  }

  // Ridge baseline at the samples and its augmented out-of-sample extension.
  const SteinFit at_samples = stein_fit(out.samples, eta, out.sigma_used);
  out.stein_at_samples = at_samples.g_hat;
  out.stein_plus = stein_plus(out.samples, eta, out.sigma_used, points);
  return out;
}

SweepCell sweep_cell(const OracleDistribution& dist, int m, std::uint64_t seed,
                     const FitConfig& fit_config, const Grid1d& grid) {
  if (dist.dim() != 1) {
    throw std::invalid_argument("sweep cells are 1-D only");
  }
  const Eigen::VectorXd x = grid_linspace(grid.lo, grid.hi, grid.n);
  Eigen::MatrixXd points(grid.n, 1);
  points.col(0) = x;

  const SampleMatrix samples = dist.sample(m, seed);
  const ScoreEstimator estimator = fit(samples, fit_config);
  const Eigen::MatrixXd est = score(estimator, points);
  const Eigen::MatrixXd truth = dist.true_score(points);
  const Eigen::VectorXd density = grid_density(dist, x);

  SweepCell cell;
  cell.target = dist.kind();
  cell.m = m;
  cell.j = estimator.basis.j_rank;
  cell.seed = seed;
  cell.weighted_mse = weighted_mse(est, truth, density, x[1] - x[0]);
  cell.mu_j = estimator.basis.mu[cell.j - 1];
  const EigenSystem full =
      eigendecompose(gram_matrix(samples, estimator.basis.sigma));
  cell.delta_j = min_retained_gap(full.eigvals, cell.j, m);
  return cell;
}

std::vector<SweepCell> run_sweep(const OracleDistribution& dist,
                                 const std::vector<int>& m_list,
                                 const std::vector<RankRule>& rank_list,
                                 const std::vector<std::uint64_t>& seeds,
                                 std::optional<double> sigma,
                                 const Grid1d& grid) {
  if (m_list.empty() || rank_list.empty() || seeds.empty()) {
    throw std::invalid_argument("sweep lists must be nonempty");
  }
  struct Job {
    int m;
    RankRule rank;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int m : m_list) {
    for (const RankRule& rank : rank_list) {
      for (std::uint64_t seed : seeds) jobs.push_back({m, rank, seed});
    }
  }
  std::vector<SweepCell> cells(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(ssge::max_threads())
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    FitConfig config;
    config.sigma = sigma;
    config.rank = jobs[i].rank;
    cells[i] = sweep_cell(dist, jobs[i].m, jobs[i].seed, config, grid);
  }
  return cells;
}

namespace {

EntropyDemoResult entropy_demo_impl(const Eigen::VectorXd& mu,
                                    const Eigen::VectorXd& s, int n_noise,
                                    int n_seeds, std::uint64_t seed,
                                    const FitConfig& fit_config,
                                    bool use_true_score) {
  if (mu.size() != s.size() || mu.size() < 1) {
    throw std::invalid_argument("entropy demo: mu/s size mismatch");
  }
  if (n_seeds < 1) throw std::invalid_argument("entropy demo: n_seeds >= 1");
  const int d = static_cast<int>(mu.size());
  const ReparamFamily family = location_scale_family(d);
  Eigen::VectorXd phi(2 * d);
  phi << mu, s;

  Eigen::MatrixXd estimates(n_seeds, 2 * d);
#pragma omp parallel for schedule(dynamic, 1) num_threads(ssge::max_threads())
  for (int k = 0; k < n_seeds; ++k) {
    const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
    if (!use_true_score) {
      EntropyGradOptions options;
      options.n_noise = n_noise;
      options.seed = run_seed;
      options.fit = fit_config;
      estimates.row(k) = entropy_grad(family, phi, options).transpose();
    } else {
      // Same Monte-Carlo average with the analytic score of N(mu, s^2) in
      // place of the fitted estimator.
      Rng rng(run_seed);
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * d);
      for (int r = 0; r < n_noise; ++r) {
        const Eigen::VectorXd eps = rng.gaussian_vector(d);
        const Eigen::VectorXd x = family.transform(eps, phi);
        Eigen::VectorXd g(d);
        for (int c = 0; c < d; ++c) g[c] = -(x[c] - mu[c]) / (s[c] * s[c]);
        grad -= family.jacobian(eps, phi) * g;
      }
      estimates.row(k) = grad.transpose() / static_cast<double>(n_noise);
    }
  }

  EntropyDemoResult out;
  out.phi = phi;
  out.estimate = estimates.colwise().mean();
  out.std_error.resize(2 * d);
  for (int c = 0; c < 2 * d; ++c) {
    const double mean = out.estimate[c];
    double acc = 0.0;
    for (int k = 0; k < n_seeds; ++k) {
      acc += (estimates(k, c) - mean) * (estimates(k, c) - mean);
    }
    const double variance = n_seeds > 1 ? acc / (n_seeds - 1) : 0.0;
    out.std_error[c] = std::sqrt(variance / n_seeds);
  }
  out.analytic.resize(2 * d);
  out.analytic.head(d).setZero();
  out.analytic.tail(d) = s.cwiseInverse();
  out.abs_error = (out.estimate - out.analytic).cwiseAbs();
  return out;
}

}  // namespace

EntropyDemoResult entropy_demo(const Eigen::VectorXd& mu,
                               const Eigen::VectorXd& s, int n_noise,
                               int n_seeds, std::uint64_t seed,
                               const FitConfig& fit_config) {
  return entropy_demo_impl(mu, s, n_noise, n_seeds, seed, fit_config, false);
}

EntropyDemoResult entropy_demo_true_score(const Eigen::VectorXd& mu,
                                          const Eigen::VectorXd& s,
                                          int n_noise, int n_seeds,
                                          std::uint64_t seed) {
  return entropy_demo_impl(mu, s, n_noise, n_seeds, seed, FitConfig{}, true);
}

}  // namespace ssge
