#pragma once

#include <Eigen/Core>
#include <optional>

#include "ssge/score.hpp"
#include "ssge/spectral.hpp"
#include "ssge/stein.hpp"

// Serial reference implementations written as plain scalar loops, sharing no
// code with the batched kernels. Tests use them as independent oracles and
// the benchmark target compares against them. Not linked into the library or
// the CLI.
namespace ssge::ref {

double rbf_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                double sigma);

Eigen::VectorXd rbf_grad_first(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, double sigma);

// Sorts all M(M-1)/2 pairwise distances and picks the middle.
double median_bandwidth(const SampleMatrix& samples);

Eigen::MatrixXd gram_matrix(const SampleMatrix& samples, double sigma);

// Shifted power iteration with deflation; returns all eigenpairs of a
// symmetric PSD matrix, descending, sign convention matching
// ssge::eigendecompose.
struct PowerEigenResult {
  Eigen::VectorXd eigvals;
  Eigen::MatrixXd eigvecs;
};
PowerEigenResult power_eigensystem(const Eigen::MatrixXd& sym, double tol,
                                   int max_iterations);

// Triple-loop Nystrom evaluation psi_hat_j at each point.
Eigen::MatrixXd nystrom_eval(const SpectralBasis& basis,
                             const Eigen::MatrixXd& points);

CoordSlices nystrom_grad(const SpectralBasis& basis,
                         const Eigen::MatrixXd& points);

// Coefficients from the gradient sums at the training samples, scalar loops.
Eigen::MatrixXd fit_beta(const SpectralBasis& basis);

// Score at points via scalar expansion of the truncated series.
Eigen::MatrixXd score(const ScoreEstimator& estimator,
                      const Eigen::MatrixXd& points);

// Gauss-Jordan inverse with partial pivoting (small systems only).
Eigen::MatrixXd invert_dense(const Eigen::MatrixXd& a);

// g_hat = -M (K + eta I)^-1 B computed through the explicit inverse.
Eigen::MatrixXd stein_fit(const SampleMatrix& samples, double eta,
                          double sigma);

// From-scratch augmented refit for a single query point; last row of the
// augmented g_hat.
Eigen::VectorXd stein_plus_single(const SampleMatrix& samples, double eta,
                                  double sigma, const Eigen::VectorXd& point);

Eigen::MatrixXd stein_plus(const SampleMatrix& samples, double eta,
                           double sigma, const Eigen::MatrixXd& points);

}  // namespace ssge::ref
