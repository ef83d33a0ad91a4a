#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <variant>

#include "ssge/kernel.hpp"

namespace ssge {

// Analytic test distributions with exact samplers, scores and unnormalized
// log densities. These are the ground truth the estimators are validated
// against.

struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // diagonal, elementwise positive
};

// Two-component mixture with shared diagonal covariance.
struct Gmm2Spec {
  double w1;
  double w2;
  Eigen::VectorXd mean1;
  Eigen::VectorXd mean2;
  Eigen::VectorXd stddev;
};

// 2-D banana: x1 = s z1, x2 = z2 + b (x1^2 - s^2), z ~ N(0, I).
struct BananaSpec {
  double curvature;  // b
  double base_std;   // s
};

class OracleDistribution {
public:
  static OracleDistribution gaussian(Eigen::VectorXd mean,
                                     Eigen::VectorXd stddev);
  static OracleDistribution gmm2(double w1, Eigen::VectorXd mean1,
                                 Eigen::VectorXd mean2,
                                 Eigen::VectorXd stddev);
  static OracleDistribution banana(double curvature, double base_std);

  int dim() const { return dim_; }
  const std::string& kind() const { return kind_; }

  // Deterministic given the seed; rows are samples.
  SampleMatrix sample(int m, std::uint64_t seed) const;

  // Exact gradient of the log density at each row, N x d.
  Eigen::MatrixXd true_score(const Eigen::MatrixXd& points) const;

  // log q up to an additive constant, one value per row.
  Eigen::VectorXd log_density_unnormalized(const Eigen::MatrixXd& points) const;

private:
  OracleDistribution() = default;

  std::variant<GaussianSpec, Gmm2Spec, BananaSpec> spec_;
  int dim_ = 0;
  std::string kind_;
};

}  // namespace ssge
