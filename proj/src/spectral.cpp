#include "ssge/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "ssge/errors.hpp"

namespace ssge {
namespace {

// Largest-magnitude entry of each column made positive, ties broken by the
// lowest index. Eigensolvers return arbitrary signs; the estimator is
// sign-invariant but CLI output must be reproducible.
void fix_column_signs(Eigen::MatrixXd& vecs) {
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = std::abs(vecs(0, j));
    for (Eigen::Index i = 1; i < vecs.rows(); ++i) {
      const double a = std::abs(vecs(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (vecs(arg, j) < 0.0) vecs.col(j) = -vecs.col(j);
  }
}

int count_retained(const Eigen::VectorXd& eigvals) {
  const double floor = kEigenvalueFloor * eigvals[0];
  int r = 0;
  while (r < eigvals.size() && eigvals[r] > floor && eigvals[r] > 0.0) ++r;
  return r;
}

}  // namespace

EigenSystem eigendecompose(const GramMatrix& gram) {
  if (gram.entries.rows() != gram.entries.cols()) {
    throw std::invalid_argument("gram matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram.entries);
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("symmetric eigensolver did not converge");
  }
  const Eigen::Index m = gram.entries.rows();
  EigenSystem out;
  out.eigvals.resize(m);
  out.eigvecs.resize(m, m);
  // Eigen returns ascending order.
  for (Eigen::Index j = 0; j < m; ++j) {
    out.eigvals[j] = solver.eigenvalues()[m - 1 - j];
    out.eigvecs.col(j) = solver.eigenvectors().col(m - 1 - j);
  }
  fix_column_signs(out.eigvecs);
  return out;
}

int select_rank(const Eigen::VectorXd& eigvals_descending, double r_bar) {
  if (eigvals_descending.size() == 0) {
    throw std::invalid_argument("select_rank: empty spectrum");
  }
  if (!(r_bar > 0.0) || r_bar > 1.0) {
    throw std::invalid_argument("select_rank: r_bar must be in (0, 1]");
  }
  if (!(eigvals_descending[0] > 0.0)) {
    throw AllZeroSpectrum("leading eigenvalue is not positive");
  }
  const int retained = count_retained(eigvals_descending);
  const double total = eigvals_descending.head(retained).sum();
  int j = 0;
  double cumulative = 0.0;
  for (int i = 0; i < retained; ++i) {
    cumulative += eigvals_descending[i];
    if (cumulative / total <= r_bar) {
      j = i + 1;
    } else {
      break;
    }
  }
  return std::max(j, 1);
}

SpectralBasis build_basis(const SampleMatrix& samples,
                          std::optional<double> sigma, const RankRule& rule) {
  if (samples.rows() < 2) {
    throw std::invalid_argument("build_basis needs at least 2 samples");
  }
  const Bandwidth bw =
      sigma.has_value() ? Bandwidth(*sigma) : median_bandwidth(samples);
  const GramMatrix gram = gram_matrix(samples, bw);
  EigenSystem eig = eigendecompose(gram);

  const Eigen::Index m = samples.rows();
  int j = 0;
  if (const auto* fixed = std::get_if<FixedRank>(&rule)) {
    if (fixed->j < 1 || fixed->j > m) {
      throw InvalidRank("fixed rank must satisfy 1 <= J <= M");
    }
    if (!(eig.eigvals[0] > 0.0)) {
      throw AllZeroSpectrum("leading eigenvalue is not positive");
    }
    j = std::min(fixed->j, count_retained(eig.eigvals));
  } else {
    j = select_rank(eig.eigvals, std::get<MassThreshold>(rule).r_bar);
  }

  SpectralBasis basis{samples,
                      bw,
                      eig.eigvals.head(j),
                      eig.eigvecs.leftCols(j),
                      j,
                      eig.eigvals.head(j) / static_cast<double>(m)};
  return basis;
}

Eigen::MatrixXd nystrom_eval(const SpectralBasis& basis,
                             const Eigen::MatrixXd& points) {
  const double root_m = std::sqrt(static_cast<double>(basis.samples.rows()));
  const Eigen::MatrixXd k = cross_kernel(points, basis.samples, basis.sigma);
  return k * basis.eigvecs * (root_m * basis.eigvals.cwiseInverse()).asDiagonal();
}

CoordSlices nystrom_grad(const SpectralBasis& basis,
                         const Eigen::MatrixXd& points) {
  const double root_m = std::sqrt(static_cast<double>(basis.samples.rows()));
  const Eigen::MatrixXd weights =
      basis.eigvecs * (root_m * basis.eigvals.cwiseInverse()).asDiagonal();
  const CrossKernel cross =
      cross_kernel_and_grads(points, basis.samples, basis.sigma);
  CoordSlices out;
  out.reserve(cross.dk.size());
  for (const Eigen::MatrixXd& slice : cross.dk) {
    out.push_back(slice * weights);
  }
  return out;
}

Eigen::MatrixXd kpca_embed(const SpectralBasis& basis,
                           const Eigen::MatrixXd& points) {
  const double m = static_cast<double>(basis.samples.rows());
  return nystrom_eval(basis, points) *
         (basis.eigvals / m).cwiseSqrt().asDiagonal();
}

}  // namespace ssge
