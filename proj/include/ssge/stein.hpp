#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <optional>

#include "ssge/kernel.hpp"

namespace ssge {

// Ridge-regression Stein gradient estimates at the sample points:
// g_hat = -M (K + eta I)^-1 B, with B(i, j) = (1/M) sum_m dk(x^i, x^m)/dx^m_j.
struct SteinFit {
  SampleMatrix samples;
  Bandwidth sigma;
  double eta;
  Eigen::MatrixXd g_hat;  // M x d
};

SteinFit stein_fit(const SampleMatrix& samples, double eta,
                   std::optional<double> sigma);

// Out-of-sample extension: for each query independently, the sample set is
// augmented with the query point (same eta and sigma, sigma not recomputed)
// and the last row of the refitted g_hat is returned.
//
// The augmented solve reuses the Cholesky factor of the base K + eta I via
// the Schur complement of the one added row, which is algebraically
// identical to refitting from scratch but O(M^2) per query instead of
// O(M^3). Queries are independent; batches evaluate in parallel.
class SteinPlusEvaluator {
public:
  SteinPlusEvaluator(const SampleMatrix& samples, double eta,
                     std::optional<double> sigma);

  Eigen::VectorXd operator()(const Eigen::VectorXd& point) const;
  Eigen::MatrixXd evaluate(const Eigen::MatrixXd& points) const;  // N x d

  const Bandwidth& sigma() const { return sigma_; }
  double eta() const { return eta_; }

private:
  SampleMatrix samples_;
  Bandwidth sigma_;
  double eta_;
  Eigen::LLT<Eigen::MatrixXd> llt_;   // of K + eta I
  Eigen::MatrixXd grad_sums_;         // M x d, S(i,:) = sum_m dk(x^i,x^m)/dx^m
};

Eigen::MatrixXd stein_plus(const SampleMatrix& samples, double eta,
                           std::optional<double> sigma,
                           const Eigen::MatrixXd& points);

}  // namespace ssge
