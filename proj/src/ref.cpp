#include "ssge/ref.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ssge::ref {

double rbf_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                double sigma) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    sq += diff * diff;
  }
  return std::exp(-sq / (2.0 * sigma * sigma));
}

Eigen::VectorXd rbf_grad_first(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, double sigma) {
  const double k = rbf_eval(x, y, sigma);
  Eigen::VectorXd grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    grad[i] = -(x[i] - y[i]) / (sigma * sigma) * k;
  }
  return grad;
}

double median_bandwidth(const SampleMatrix& samples) {
  const Eigen::Index m = samples.rows();
  std::vector<double> dists;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double sq = 0.0;
      for (Eigen::Index c = 0; c < samples.cols(); ++c) {
        const double diff = samples(i, c) - samples(j, c);
        sq += diff * diff;
      }
      dists.push_back(std::sqrt(sq));
    }
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t n = dists.size();
  if (n % 2 == 1) return dists[n / 2];
  return 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
}

Eigen::MatrixXd gram_matrix(const SampleMatrix& samples, double sigma) {
  const Eigen::Index m = samples.rows();
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      k(i, j) = rbf_eval(samples.row(i).transpose(),
                         samples.row(j).transpose(), sigma);
    }
  }
  return k;
}

PowerEigenResult power_eigensystem(const Eigen::MatrixXd& sym, double tol,
                                   int max_iterations) {
  const Eigen::Index m = sym.rows();
  Eigen::MatrixXd work = sym;
  PowerEigenResult out;
  out.eigvals.resize(m);
  out.eigvecs.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    // Deterministic start vector, biased off any axis.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      v[i] += 0.01 * static_cast<double>((i + 7 * j) % 13);
    }
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
      Eigen::VectorXd w = work * v;
      const double norm = w.norm();
      if (norm == 0.0) break;  // v lies in the kernel of the deflated matrix
      w /= norm;
      lambda = w.dot(work * w);
      if ((work * w - lambda * w).norm() <= tol * std::abs(lambda) + tol) {
        v = w;
        break;
      }
      v = w;
    }
    out.eigvals[j] = lambda;
    out.eigvecs.col(j) = v;
    work -= lambda * v * v.transpose();
  }
  // Match the library's sign convention for comparability.
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < m; ++i) {
      if (std::abs(out.eigvecs(i, j)) > std::abs(out.eigvecs(arg, j))) arg = i;
    }
    if (out.eigvecs(arg, j) < 0.0) out.eigvecs.col(j) = -out.eigvecs.col(j);
  }
  return out;
}

Eigen::MatrixXd nystrom_eval(const SpectralBasis& basis,
                             const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index m = basis.samples.rows();
  const Eigen::Index j_rank = basis.j_rank;
  const double root_m = std::sqrt(static_cast<double>(m));
  Eigen::MatrixXd psi(n, j_rank);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index j = 0; j < j_rank; ++j) {
      double acc = 0.0;
      for (Eigen::Index s = 0; s < m; ++s) {
        acc += basis.eigvecs(s, j) *
               rbf_eval(points.row(p).transpose(),
                        basis.samples.row(s).transpose(),
                        basis.sigma.sigma());
      }
      psi(p, j) = root_m / basis.eigvals[j] * acc;
    }
  }
  return psi;
}

CoordSlices nystrom_grad(const SpectralBasis& basis,
                         const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index m = basis.samples.rows();
  const Eigen::Index d = basis.samples.cols();
  const Eigen::Index j_rank = basis.j_rank;
  const double root_m = std::sqrt(static_cast<double>(m));
  CoordSlices slices(static_cast<std::size_t>(d),
                     Eigen::MatrixXd::Zero(n, j_rank));
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index j = 0; j < j_rank; ++j) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
      for (Eigen::Index s = 0; s < m; ++s) {
        acc += basis.eigvecs(s, j) *
               rbf_grad_first(points.row(p).transpose(),
                              basis.samples.row(s).transpose(),
                              basis.sigma.sigma());
      }
      for (Eigen::Index i = 0; i < d; ++i) {
        slices[static_cast<std::size_t>(i)](p, j) =
            root_m / basis.eigvals[j] * acc[i];
      }
    }
  }
  return slices;
}

Eigen::MatrixXd fit_beta(const SpectralBasis& basis) {
  const Eigen::Index m = basis.samples.rows();
  const Eigen::Index d = basis.samples.cols();
  const CoordSlices grads = ssge::ref::nystrom_grad(basis, basis.samples);
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(basis.j_rank, d);
  for (Eigen::Index j = 0; j < basis.j_rank; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      double acc = 0.0;
      for (Eigen::Index s = 0; s < m; ++s) {
        acc += grads[static_cast<std::size_t>(i)](s, j);
      }
      beta(j, i) = -acc / static_cast<double>(m);
    }
  }
  return beta;
}

Eigen::MatrixXd score(const ScoreEstimator& estimator,
                      const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = estimator.basis.samples.cols();
  const Eigen::MatrixXd psi = ssge::ref::nystrom_eval(estimator.basis, points);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, d);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index i = 0; i < d; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < estimator.basis.j_rank; ++j) {
        acc += estimator.beta(j, i) * psi(p, j);
      }
      out(p, i) = acc;
    }
  }
  return out;
}

Eigen::MatrixXd invert_dense(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd left = a;
  Eigen::MatrixXd right = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(left(r, col)) > std::abs(left(pivot, col))) pivot = r;
    }
    if (left(pivot, col) == 0.0) {
      throw std::runtime_error("invert_dense: singular matrix");
    }
    if (pivot != col) {
      left.row(pivot).swap(left.row(col));
      right.row(pivot).swap(right.row(col));
    }
    const double scale = left(col, col);
    left.row(col) /= scale;
    right.row(col) /= scale;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = left(r, col);
      if (factor == 0.0) continue;
      left.row(r) -= factor * left.row(col);
      right.row(r) -= factor * right.row(col);
    }
  }
  return right;
}

Eigen::MatrixXd stein_fit(const SampleMatrix& samples, double eta,
                          double sigma) {
  const Eigen::Index m = samples.rows();
  const Eigen::Index d = samples.cols();
  const Eigen::MatrixXd k = gram_matrix(samples, sigma);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index s = 0; s < m; ++s) {
      // d k(x^i, x^s) / d x^s_j = -(first-argument gradient), coordinatewise
      const Eigen::VectorXd grad =
          rbf_grad_first(samples.row(i).transpose(),
                         samples.row(s).transpose(), sigma);
      for (Eigen::Index j = 0; j < d; ++j) b(i, j) -= grad[j];
    }
  }
  b /= static_cast<double>(m);
  Eigen::MatrixXd regularized = k;
  for (Eigen::Index i = 0; i < m; ++i) regularized(i, i) += eta;
  return -static_cast<double>(m) * invert_dense(regularized) * b;
}

Eigen::VectorXd stein_plus_single(const SampleMatrix& samples, double eta,
                                  double sigma, const Eigen::VectorXd& point) {
  const Eigen::Index m = samples.rows();
  SampleMatrix augmented(m + 1, samples.cols());
  augmented.topRows(m) = samples;
  augmented.row(m) = point.transpose();
  const Eigen::MatrixXd g_hat = stein_fit(augmented, eta, sigma);
  return g_hat.row(m).transpose();
}

Eigen::MatrixXd stein_plus(const SampleMatrix& samples, double eta,
                           double sigma, const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.row(i) =
        stein_plus_single(samples, eta, sigma, points.row(i).transpose())
            .transpose();
  }
  return out;
}

}  // namespace ssge::ref
