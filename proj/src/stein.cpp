#include "ssge/stein.hpp"

#include <cmath>
#include <stdexcept>

#include "ssge/errors.hpp"
#include "ssge/parallel.hpp"

namespace ssge {
namespace {

// S(i, :) = sum_m dk(x^i, x^m)/dx^m = sum_m (x^i - x^m) k(x^i, x^m) / sigma^2.
// The paper's B matrix is S / M.
Eigen::MatrixXd kernel_grad_sums(const SampleMatrix& samples,
                                 const Eigen::MatrixXd& gram,
                                 const Bandwidth& bw) {
  const Eigen::Index m = samples.rows();
  const Eigen::Index d = samples.cols();
  Eigen::MatrixXd sums(m, d);
  const double inv_sq = bw.inv_sigma_sq();
#pragma omp parallel for schedule(static) num_threads(ssge::max_threads())
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
    for (Eigen::Index s = 0; s < m; ++s) {
      acc += (samples.row(i) - samples.row(s)) * (gram(i, s) * inv_sq);
    }
    sums.row(i) = acc;
  }
  return sums;
}

}  // namespace

SteinPlusEvaluator::SteinPlusEvaluator(const SampleMatrix& samples, double eta,
                                       std::optional<double> sigma)
    : samples_(samples),
      sigma_(sigma.has_value() ? Bandwidth(*sigma) : median_bandwidth(samples)),
      eta_(eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (samples.rows() < 2) {
    throw std::invalid_argument("stein fit needs at least 2 samples");
  }
  const Eigen::MatrixXd gram = gram_matrix(samples_, sigma_).entries;
  Eigen::MatrixXd regularized = gram;
  regularized.diagonal().array() += eta_;
  llt_.compute(regularized);
  if (llt_.info() != Eigen::Success) {
    throw SingularSystem("Cholesky factorization of K + eta I failed");
  }
  grad_sums_ = kernel_grad_sums(samples_, gram, sigma_);
}

Eigen::VectorXd SteinPlusEvaluator::operator()(
    const Eigen::VectorXd& point) const {
  const Eigen::Index m = samples_.rows();
  const Eigen::Index d = samples_.cols();
  const double inv_sq = sigma_.inv_sigma_sq();

  // Kernel column and the gradient corrections the added row introduces.
  Eigen::VectorXd k_x(m);
  Eigen::MatrixXd correction(m, d);  // dk(x^i, y)/dy at y = point
  Eigen::RowVectorXd query_row = Eigen::RowVectorXd::Zero(d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::RowVectorXd diff = samples_.row(i) - point.transpose();
    const double kv = std::exp(-0.5 * inv_sq * diff.squaredNorm());
    k_x[i] = kv;
    correction.row(i) = diff * (kv * inv_sq);
    // dk(y, x^m)/dx^m summed over m, for the query row of the augmented B.
    query_row += -diff * (kv * inv_sq);
  }

  // Schur complement of the single added row in the augmented K + eta I.
  const Eigen::VectorXd v = llt_.solve(k_x);
  const double schur = (1.0 + eta_) - k_x.dot(v);
  if (!(schur > 0.0)) {
    throw SingularSystem("augmented Stein system lost positive definiteness");
  }
  // Last row of -(M+1) (K~ + eta I)^-1 B~; the query's own dk(y,y)/dy is 0.
  const Eigen::RowVectorXd estimate =
      -(query_row - v.transpose() * (grad_sums_ + correction)) / schur;
  return estimate.transpose();
}

Eigen::MatrixXd SteinPlusEvaluator::evaluate(
    const Eigen::MatrixXd& points) const {
  const Eigen::Index n = points.rows();
  if (points.cols() != samples_.cols()) {
    throw std::invalid_argument("points and samples dimension mismatch");
  }
  Eigen::MatrixXd out(n, samples_.cols());
#pragma omp parallel for schedule(static) num_threads(ssge::max_threads())
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) = (*this)(points.row(i).transpose()).transpose();
  }
  return out;
}

SteinFit stein_fit(const SampleMatrix& samples, double eta,
                   std::optional<double> sigma) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (samples.rows() < 2) {
    throw std::invalid_argument("stein_fit needs at least 2 samples");
  }
  const Bandwidth bw =
      sigma.has_value() ? Bandwidth(*sigma) : median_bandwidth(samples);
  const Eigen::MatrixXd gram = gram_matrix(samples, bw).entries;
  Eigen::MatrixXd regularized = gram;
  regularized.diagonal().array() += eta;
  const Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem("Cholesky factorization of K + eta I failed");
  }
  const Eigen::MatrixXd b =
      kernel_grad_sums(samples, gram, bw) / static_cast<double>(samples.rows());
  Eigen::MatrixXd g_hat =
      -static_cast<double>(samples.rows()) * llt.solve(b);
  return SteinFit{samples, bw, eta, std::move(g_hat)};
}

Eigen::MatrixXd stein_plus(const SampleMatrix& samples, double eta,
                           std::optional<double> sigma,
                           const Eigen::MatrixXd& points) {
  return SteinPlusEvaluator(samples, eta, sigma).evaluate(points);
}

}  // namespace ssge
