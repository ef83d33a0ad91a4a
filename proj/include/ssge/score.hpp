#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "ssge/spectral.hpp"

namespace ssge {

struct FitConfig {
  std::optional<double> sigma;  // nullopt = median heuristic
  RankRule rank = MassThreshold{0.95};
};

// Spectral Stein gradient estimator of the score function grad log q.
// score(x)_i = sum_j beta(j, i) * psi_hat_j(x), with
// beta(j, i) = -(1/M) sum_m d psi_hat_j / d x_i at sample m.
struct ScoreEstimator {
  SpectralBasis basis;
  Eigen::MatrixXd beta;  // J x d, row per eigenfunction
};

ScoreEstimator fit(const SampleMatrix& samples, const FitConfig& config);

// Fits the coefficients for an already-built basis.
ScoreEstimator fit_from_basis(SpectralBasis basis);

// Score estimates at arbitrary points, N x d.
Eigen::MatrixXd score(const ScoreEstimator& estimator,
                      const Eigen::MatrixXd& points);

using PointFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Stein-identity residual diagnostic, J x d:
// (j, i) = (1/P) sum_p [ psi_hat_j(z^p) * oracle_score(z^p)_i
//                        + d psi_hat_j / d x_i (z^p) ].
// Near zero when eval_samples are drawn from the estimator's q.
Eigen::MatrixXd stein_residual(const ScoreEstimator& estimator,
                               const PointFn& oracle_score,
                               const Eigen::MatrixXd& eval_samples);

}  // namespace ssge
