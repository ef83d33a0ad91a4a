#include "ssge/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ssge/rng.hpp"

namespace ssge {
namespace {

void require_positive(const Eigen::VectorXd& stddev) {
  for (Eigen::Index i = 0; i < stddev.size(); ++i) {
    if (!(stddev[i] > 0.0)) {
      throw std::invalid_argument("standard deviations must be positive");
    }
  }
}

double log_normal_unnorm(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& stddev) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mean[i]) / stddev[i];
    acc -= 0.5 * z * z;
  }
  return acc;
}

}  // namespace

OracleDistribution OracleDistribution::gaussian(Eigen::VectorXd mean,
                                                Eigen::VectorXd stddev) {
  if (mean.size() != stddev.size() || mean.size() < 1) {
    throw std::invalid_argument("gaussian: mean/std size mismatch");
  }
  require_positive(stddev);
  OracleDistribution d;
  d.dim_ = static_cast<int>(mean.size());
  d.kind_ = "gaussian";
  d.spec_ = GaussianSpec{std::move(mean), std::move(stddev)};
  return d;
}

OracleDistribution OracleDistribution::gmm2(double w1, Eigen::VectorXd mean1,
                                            Eigen::VectorXd mean2,
                                            Eigen::VectorXd stddev) {
  if (mean1.size() != mean2.size() || mean1.size() != stddev.size() ||
      mean1.size() < 1) {
    throw std::invalid_argument("gmm2: component size mismatch");
  }
  if (!(w1 > 0.0) || !(w1 < 1.0)) {
    throw std::invalid_argument("gmm2: w1 must be in (0, 1)");
  }
  require_positive(stddev);
  OracleDistribution d;
  d.dim_ = static_cast<int>(mean1.size());
  d.kind_ = "gmm2";
  d.spec_ = Gmm2Spec{w1, 1.0 - w1, std::move(mean1), std::move(mean2),
                     std::move(stddev)};
  return d;
}

OracleDistribution OracleDistribution::banana(double curvature,
                                              double base_std) {
  if (!std::isfinite(curvature) || !(base_std > 0.0)) {
    throw std::invalid_argument("banana: invalid parameters");
  }
  OracleDistribution d;
  d.dim_ = 2;
  d.kind_ = "banana";
  d.spec_ = BananaSpec{curvature, base_std};
  return d;
}

SampleMatrix OracleDistribution::sample(int m, std::uint64_t seed) const {
  if (m < 1) throw std::invalid_argument("sample count must be >= 1");
  Rng rng(seed);
  SampleMatrix out(m, dim_);
  if (const auto* g = std::get_if<GaussianSpec>(&spec_)) {
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < dim_; ++c) {
        out(r, c) = g->mean[c] + g->stddev[c] * rng.gaussian();
      }
    }
  } else if (const auto* mix = std::get_if<Gmm2Spec>(&spec_)) {
    for (int r = 0; r < m; ++r) {
      const bool first = rng.uniform() < mix->w1;
      const Eigen::VectorXd& mean = first ? mix->mean1 : mix->mean2;
      for (int c = 0; c < dim_; ++c) {
        out(r, c) = mean[c] + mix->stddev[c] * rng.gaussian();
      }
    }
  } else {
    const auto& b = std::get<BananaSpec>(spec_);
    for (int r = 0; r < m; ++r) {
      const double x1 = b.base_std * rng.gaussian();
      const double z2 = rng.gaussian();
      out(r, 0) = x1;
      out(r, 1) = z2 + b.curvature * (x1 * x1 - b.base_std * b.base_std);
    }
  }
  return out;
}

Eigen::MatrixXd OracleDistribution::true_score(
    const Eigen::MatrixXd& points) const {
  if (points.cols() != dim_) {
    throw std::invalid_argument("true_score: dimension mismatch");
  }
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out(n, dim_);
  if (const auto* g = std::get_if<GaussianSpec>(&spec_)) {
    for (Eigen::Index r = 0; r < n; ++r) {
      for (int c = 0; c < dim_; ++c) {
        out(r, c) = -(points(r, c) - g->mean[c]) /
                    (g->stddev[c] * g->stddev[c]);
      }
    }
  } else if (const auto* mix = std::get_if<Gmm2Spec>(&spec_)) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const Eigen::VectorXd x = points.row(r).transpose();
      const double l1 = std::log(mix->w1) + log_normal_unnorm(x, mix->mean1, mix->stddev);
      const double l2 = std::log(mix->w2) + log_normal_unnorm(x, mix->mean2, mix->stddev);
      const double lmax = std::max(l1, l2);
      const double e1 = std::exp(l1 - lmax);
      const double e2 = std::exp(l2 - lmax);
      const double r1 = e1 / (e1 + e2);  // responsibility of component 1
      for (int c = 0; c < dim_; ++c) {
        const double inv_var = 1.0 / (mix->stddev[c] * mix->stddev[c]);
        out(r, c) = -inv_var * (r1 * (x[c] - mix->mean1[c]) +
                                (1.0 - r1) * (x[c] - mix->mean2[c]));
      }
    }
  } else {
    const auto& b = std::get<BananaSpec>(spec_);
    const double s_sq = b.base_std * b.base_std;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double x1 = points(r, 0);
      const double x2 = points(r, 1);
      const double u = x2 - b.curvature * (x1 * x1 - s_sq);
      out(r, 0) = -x1 / s_sq + 2.0 * b.curvature * x1 * u;
      out(r, 1) = -u;
    }
  }
  return out;
}

Eigen::VectorXd OracleDistribution::log_density_unnormalized(
    const Eigen::MatrixXd& points) const {
  if (points.cols() != dim_) {
    throw std::invalid_argument("log_density: dimension mismatch");
  }
  const Eigen::Index n = points.rows();
  Eigen::VectorXd out(n);
  if (const auto* g = std::get_if<GaussianSpec>(&spec_)) {
    for (Eigen::Index r = 0; r < n; ++r) {
      out[r] = log_normal_unnorm(points.row(r).transpose(), g->mean, g->stddev);
    }
  } else if (const auto* mix = std::get_if<Gmm2Spec>(&spec_)) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const Eigen::VectorXd x = points.row(r).transpose();
      const double l1 = std::log(mix->w1) + log_normal_unnorm(x, mix->mean1, mix->stddev);
      const double l2 = std::log(mix->w2) + log_normal_unnorm(x, mix->mean2, mix->stddev);
      const double lmax = std::max(l1, l2);
      out[r] = lmax + std::log(std::exp(l1 - lmax) + std::exp(l2 - lmax));
    }
  } else {
    const auto& b = std::get<BananaSpec>(spec_);
    const double s_sq = b.base_std * b.base_std;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double x1 = points(r, 0);
      const double u = points(r, 1) - b.curvature * (x1 * x1 - s_sq);
      out[r] = -0.5 * x1 * x1 / s_sq - 0.5 * u * u;
    }
  }
  return out;
}

}  // namespace ssge
