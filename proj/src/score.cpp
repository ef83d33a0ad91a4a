#include "ssge/score.hpp"

#include <stdexcept>

namespace ssge {

ScoreEstimator fit_from_basis(SpectralBasis basis) {
  const Eigen::Index d = basis.samples.cols();
  const CoordSlices grads = nystrom_grad(basis, basis.samples);
  Eigen::MatrixXd beta(basis.j_rank, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    beta.col(i) = -grads[static_cast<std::size_t>(i)].colwise().mean();
  }
  return ScoreEstimator{std::move(basis), std::move(beta)};
}

ScoreEstimator fit(const SampleMatrix& samples, const FitConfig& config) {
  if (samples.rows() < 2 || samples.cols() < 1) {
    throw std::invalid_argument("fit needs M >= 2 samples of dimension >= 1");
  }
  return fit_from_basis(build_basis(samples, config.sigma, config.rank));
}

Eigen::MatrixXd score(const ScoreEstimator& estimator,
                      const Eigen::MatrixXd& points) {
  return nystrom_eval(estimator.basis, points) * estimator.beta;
}

Eigen::MatrixXd stein_residual(const ScoreEstimator& estimator,
                               const PointFn& oracle_score,
                               const Eigen::MatrixXd& eval_samples) {
  const Eigen::Index p = eval_samples.rows();
  const Eigen::Index d = eval_samples.cols();
  if (p < 1) throw std::invalid_argument("stein_residual: no eval samples");

  Eigen::MatrixXd oracle(p, d);
  for (Eigen::Index n = 0; n < p; ++n) {
    oracle.row(n) = oracle_score(eval_samples.row(n).transpose()).transpose();
  }
  const Eigen::MatrixXd psi = nystrom_eval(estimator.basis, eval_samples);
  const CoordSlices grads = nystrom_grad(estimator.basis, eval_samples);

  Eigen::MatrixXd residual(estimator.basis.j_rank, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    residual.col(i) =
        (psi.transpose() * oracle.col(i)) / static_cast<double>(p) +
        grads[static_cast<std::size_t>(i)].colwise().mean().transpose();
  }
  return residual;
}

}  // namespace ssge
