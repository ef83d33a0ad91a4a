#pragma once

#include <Eigen/Core>
#include <vector>

namespace ssge {

// Rows are samples, columns are coordinates.
using SampleMatrix = Eigen::MatrixXd;

// Stack of per-coordinate matrices: slices[i](n, m) is the derivative of
// some (n, m)-indexed quantity with respect to coordinate i.
using CoordSlices = std::vector<Eigen::MatrixXd>;

class Bandwidth {
public:
  explicit Bandwidth(double sigma);

  double sigma() const { return sigma_; }
  double inv_sigma_sq() const { return inv_sigma_sq_; }

private:
  double sigma_;
  double inv_sigma_sq_;
};

// Symmetric RBF Gram matrix with unit diagonal. Computed once for the upper
// triangle and mirrored, so entries(i, j) == entries(j, i) exactly.
struct GramMatrix {
  Eigen::MatrixXd entries;
};

// Median of the M(M-1)/2 pairwise Euclidean distances; for even counts the
// mean of the two central order statistics. Throws DegenerateSamples when
// the median is zero.
Bandwidth median_bandwidth(const SampleMatrix& samples);

// k(x, y) = exp(-||x - y||^2 / (2 sigma^2)), in (0, 1].
double rbf_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                const Bandwidth& bw);

// Gradient of rbf_eval with respect to its first argument:
// -(x - y) / sigma^2 * k(x, y). The gradient in the second argument is the
// negation.
Eigen::VectorXd rbf_grad_first(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Bandwidth& bw);

GramMatrix gram_matrix(const SampleMatrix& samples, const Bandwidth& bw);

struct CrossKernel {
  Eigen::MatrixXd k;  // N x M, k(n, m) = rbf(point_n, sample_m)
  CoordSlices dk;     // d slices N x M, dk[i](n, m) = d k / d point_n[i]
};

CrossKernel cross_kernel_and_grads(const Eigen::MatrixXd& points,
                                   const SampleMatrix& samples,
                                   const Bandwidth& bw);

// Kernel values only (skips the gradient slices).
Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& points,
                             const SampleMatrix& samples, const Bandwidth& bw);

}  // namespace ssge
