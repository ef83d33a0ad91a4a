#pragma once

#include <Eigen/Core>
#include <optional>
#include <variant>

#include "ssge/kernel.hpp"

namespace ssge {

// Full eigendecomposition of a Gram matrix. Eigenvalues are sorted
// descending; eigenvector columns are orthonormal and sign-fixed so that the
// entry of largest magnitude in each column is positive (ties broken by
// lowest index).
struct EigenSystem {
  Eigen::VectorXd eigvals;  // length M, descending
  Eigen::MatrixXd eigvecs;  // M x M, column j pairs with eigvals[j]
};

EigenSystem eigendecompose(const GramMatrix& gram);

struct FixedRank {
  int j;
};
struct MassThreshold {
  double r_bar;  // in (0, 1]
};
using RankRule = std::variant<FixedRank, MassThreshold>;

// Largest J whose cumulative eigenvalue fraction stays <= r_bar, clamped to
// J >= 1. Eigenvalues below 1e-8 * lambda_1 are treated as zero mass in both
// the numerator and the denominator. Throws AllZeroSpectrum when
// lambda_1 <= 0.
int select_rank(const Eigen::VectorXd& eigvals_descending, double r_bar);

// Relative floor under which trailing eigenvalues are discarded before rank
// selection (they would amplify noise through the 1/lambda_j factor).
inline constexpr double kEigenvalueFloor = 1e-8;

struct SpectralBasis {
  SampleMatrix samples;     // M x d
  Bandwidth sigma;
  Eigen::VectorXd eigvals;  // retained lambda_1..lambda_J, descending
  Eigen::MatrixXd eigvecs;  // M x J
  int j_rank;               // J
  Eigen::VectorXd mu;       // lambda_j / M
};

// gram_matrix -> eigendecompose -> rank selection. sigma std::nullopt means
// the median heuristic. FixedRank j must satisfy 1 <= j <= M; the effective
// rank is additionally capped by the count of eigenvalues above the floor.
SpectralBasis build_basis(const SampleMatrix& samples,
                          std::optional<double> sigma, const RankRule& rule);

// Out-of-sample eigenfunction values, (n, j) = psi_hat_j(points.row(n)):
// psi_hat_j(x) = (sqrt(M) / lambda_j) * sum_m u_jm k(x, x^m).
// At the training samples this reproduces sqrt(M) * u_jm.
Eigen::MatrixXd nystrom_eval(const SpectralBasis& basis,
                             const Eigen::MatrixXd& points);

// Analytic gradient of nystrom_eval in the evaluation point; d slices of
// N x J, slices[i](n, j) = d psi_hat_j / d x_i at points.row(n).
CoordSlices nystrom_grad(const SpectralBasis& basis,
                         const Eigen::MatrixXd& points);

// Kernel PCA embedding xi_j(x) = sqrt(lambda_j / M) * psi_hat_j(x), equal to
// alpha_j . k_x with alpha_j = u_j / sqrt(lambda_j).
Eigen::MatrixXd kpca_embed(const SpectralBasis& basis,
                           const Eigen::MatrixXd& points);

}  // namespace ssge
