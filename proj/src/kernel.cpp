#include "ssge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ssge/errors.hpp"
#include "ssge/parallel.hpp"

namespace ssge {

Bandwidth::Bandwidth(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("bandwidth must be a positive finite value");
  }
  inv_sigma_sq_ = 1.0 / (sigma * sigma);
}

Bandwidth median_bandwidth(const SampleMatrix& samples) {
  const Eigen::Index m = samples.rows();
  if (m < 2) {
    throw std::invalid_argument("median_bandwidth needs at least 2 samples");
  }
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      dists.push_back((samples.row(i) - samples.row(j)).norm());
    }
  }
  const std::size_t n = dists.size();
  const std::size_t mid = n / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  double median = dists[mid];
  if (n % 2 == 0) {
    const double below = *std::max_element(dists.begin(), dists.begin() + mid);
    median = 0.5 * (below + median);
  }
  if (median == 0.0) {
    throw DegenerateSamples(
        "median pairwise distance is zero (more than half of the sample "
        "pairs are duplicates)");
  }
  return Bandwidth(median);
}

double rbf_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                const Bandwidth& bw) {
  return std::exp(-0.5 * (x - y).squaredNorm() * bw.inv_sigma_sq());
}

Eigen::VectorXd rbf_grad_first(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Bandwidth& bw) {
  const double k = rbf_eval(x, y, bw);
  return (y - x) * (k * bw.inv_sigma_sq());
}

GramMatrix gram_matrix(const SampleMatrix& samples, const Bandwidth& bw) {
  const Eigen::Index m = samples.rows();
  if (m < 1) throw std::invalid_argument("gram_matrix needs at least 1 sample");
  Eigen::MatrixXd k(m, m);
  const double scale = -0.5 * bw.inv_sigma_sq();
#pragma omp parallel for schedule(dynamic, 8) num_threads(ssge::max_threads())
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      k(i, j) = std::exp(scale * (samples.row(i) - samples.row(j)).squaredNorm());
    }
  }
  // Mirror the upper triangle so symmetry is exact.
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) k(j, i) = k(i, j);
  }
  return GramMatrix{std::move(k)};
}

CrossKernel cross_kernel_and_grads(const Eigen::MatrixXd& points,
                                   const SampleMatrix& samples,
                                   const Bandwidth& bw) {
  const Eigen::Index n = points.rows();
  const Eigen::Index m = samples.rows();
  const Eigen::Index d = samples.cols();
  if (points.cols() != d) {
    throw std::invalid_argument("points and samples dimension mismatch");
  }
  CrossKernel out;
  out.k.resize(n, m);
  out.dk.assign(static_cast<std::size_t>(d), Eigen::MatrixXd(n, m));
  const double inv_sq = bw.inv_sigma_sq();
#pragma omp parallel for schedule(static) num_threads(ssge::max_threads())
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index s = 0; s < m; ++s) {
      const double kv =
          std::exp(-0.5 * inv_sq * (points.row(p) - samples.row(s)).squaredNorm());
      out.k(p, s) = kv;
      for (Eigen::Index i = 0; i < d; ++i) {
        out.dk[static_cast<std::size_t>(i)](p, s) =
            (samples(s, i) - points(p, i)) * kv * inv_sq;
      }
    }
  }
  return out;
}

Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& points,
                             const SampleMatrix& samples, const Bandwidth& bw) {
  const Eigen::Index n = points.rows();
  const Eigen::Index m = samples.rows();
  if (points.cols() != samples.cols()) {
    throw std::invalid_argument("points and samples dimension mismatch");
  }
  Eigen::MatrixXd k(n, m);
  const double scale = -0.5 * bw.inv_sigma_sq();
#pragma omp parallel for schedule(static) num_threads(ssge::max_threads())
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index s = 0; s < m; ++s) {
      k(p, s) = std::exp(scale * (points.row(p) - samples.row(s)).squaredNorm());
    }
  }
  return k;
}

}  // namespace ssge
