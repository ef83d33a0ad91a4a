#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "ssge/errors.hpp"
#include "ssge/kernel.hpp"
#include "ssge/parallel.hpp"
#include "ssge/ref.hpp"
#include "testutil.hpp"

using namespace ssge;

TEST_CASE("bandwidth rejects non-positive sigma") {
  CHECK_THROWS_AS(Bandwidth(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Bandwidth(-1.0), std::invalid_argument);
  CHECK(Bandwidth(2.5).sigma() == 2.5);
}

TEST_CASE("median bandwidth on tiny hand cases") {
  SampleMatrix two(2, 1);
  two << 0.0, 2.0;
  CHECK(median_bandwidth(two).sigma() == 2.0);

  SampleMatrix three(3, 1);
  three << 0.0, 1.0, 3.0;  // pairwise distances {1, 2, 3}
  CHECK(median_bandwidth(three).sigma() == 2.0);
}

TEST_CASE("median bandwidth matches the sort-all-pairs reference") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const SampleMatrix samples = testutil::random_matrix(100, 1, seed);
    const double expected = ref::median_bandwidth(samples);
    CHECK(std::abs(median_bandwidth(samples).sigma() - expected) <= 1e-12);
  }
  // Even pair count as well (M = 4 -> 6 distances).
  const SampleMatrix even = testutil::random_matrix(4, 2, 21);
  CHECK(std::abs(median_bandwidth(even).sigma() -
                 ref::median_bandwidth(even)) <= 1e-12);
}

TEST_CASE("median bandwidth is permutation invariant") {
  const SampleMatrix samples = testutil::random_matrix(23, 3, 31);
  std::vector<int> perm(23);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(77);
  for (int i = 22; i > 0; --i) {
    std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  }
  SampleMatrix shuffled(23, 3);
  for (int i = 0; i < 23; ++i) shuffled.row(i) = samples.row(perm[i]);
  CHECK(median_bandwidth(samples).sigma() ==
        median_bandwidth(shuffled).sigma());
}

TEST_CASE("median bandwidth fails loudly on duplicate-heavy input") {
  SampleMatrix dup(4, 1);
  dup << 1.0, 1.0, 1.0, 5.0;  // distances {0,0,0,4,4,4}, median (0+4)/2
  CHECK(median_bandwidth(dup).sigma() == 2.0);

  SampleMatrix worse(5, 1);
  worse << 1.0, 1.0, 1.0, 1.0, 5.0;  // 10 distances: six 0s -> median 0
  CHECK_THROWS_AS(median_bandwidth(worse), DegenerateSamples);
}

TEST_CASE("rbf value on hand cases") {
  const Bandwidth bw(1.7);
  Eigen::VectorXd x(3), y(3);
  x << 0.4, -1.0, 2.0;
  y = x;
  CHECK(rbf_eval(x, y, bw) == 1.0);

  Eigen::VectorXd a(1), b(1);
  a << 0.0;
  b << 1.7 * std::sqrt(2.0);
  CHECK(rbf_eval(a, b, bw) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("rbf value matches the log-domain reference") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(0, 4));
    Eigen::VectorXd x = rng.gaussian_vector(d);
    Eigen::VectorXd y = rng.gaussian_vector(d);
    const double sigma = 0.3 + rng.uniform();
    const double got = rbf_eval(x, y, Bandwidth(sigma));
    const double expected = ref::rbf_eval(x, y, sigma);
    CHECK(std::abs(got - expected) <= 1e-14);
    CHECK(got > 0.0);
    CHECK(got <= 1.0);
    CHECK(rbf_eval(x, y, Bandwidth(sigma)) == rbf_eval(y, x, Bandwidth(sigma)));
  }
}

TEST_CASE("rbf gradient: stationary point, closed form, finite differences") {
  const Bandwidth unit(1.0);
  Eigen::VectorXd x(1), y(1);
  x << 1.0;
  y << 1.0;
  CHECK(rbf_grad_first(x, y, unit).norm() == 0.0);

  y << 0.0;
  CHECK(rbf_grad_first(x, y, unit)[0] ==
        doctest::Approx(-std::exp(-0.5)).epsilon(1e-14));

  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(0, 3));
    const Eigen::VectorXd a = rng.gaussian_vector(d);
    const Eigen::VectorXd b = rng.gaussian_vector(d);
    const double sigma = 0.5 + rng.uniform();
    const Bandwidth bw(sigma);
    const Eigen::VectorXd grad = rbf_grad_first(a, b, bw);
    const Eigen::VectorXd fd = testutil::fd_gradient(
        [&](const Eigen::VectorXd& p) { return rbf_eval(p, b, bw); }, a);
    for (int i = 0; i < d; ++i) CHECK(testutil::close_rel(grad[i], fd[i], 1e-6));
    // Gradient in the second argument is the exact negation.
    const Eigen::VectorXd swapped = rbf_grad_first(b, a, bw);
    CHECK((grad + swapped).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gram matrix hand cases and invariants") {
  const Bandwidth bw(1.0);
  SampleMatrix one(1, 2);
  one << 3.0, -1.0;
  CHECK(gram_matrix(one, bw).entries == Eigen::MatrixXd::Ones(1, 1));

  SampleMatrix twin(2, 2);
  twin << 0.5, 0.5, 0.5, 0.5;
  CHECK(gram_matrix(twin, bw).entries == Eigen::MatrixXd::Ones(2, 2));
}

TEST_CASE("gram matrix equals the naive double loop") {
  const SampleMatrix samples = testutil::random_matrix(50, 3, 41);
  const double sigma = 1.3;
  const Eigen::MatrixXd got = gram_matrix(samples, Bandwidth(sigma)).entries;
  const Eigen::MatrixXd expected = ref::gram_matrix(samples, sigma);
  CHECK(testutil::max_abs_diff(got, expected) <= 1e-14);
  CHECK(got == got.transpose().eval());
  CHECK(got.diagonal() == Eigen::VectorXd::Ones(50));
}

TEST_CASE("gram matrices stay positive semidefinite") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform_int(0, 27));
    const int d = 1 + static_cast<int>(rng.uniform_int(0, 4));
    const SampleMatrix samples =
        testutil::random_matrix(m, d, 1000 + static_cast<std::uint64_t>(trial));
    const Eigen::MatrixXd k =
        gram_matrix(samples, median_bandwidth(samples)).entries;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    const double max_eig = eig.eigenvalues().maxCoeff();
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * max_eig);
  }
}

TEST_CASE("cross kernel consistency with gram and scalar calls") {
  const SampleMatrix samples = testutil::random_matrix(17, 2, 61);
  const Bandwidth bw = median_bandwidth(samples);

  const CrossKernel self = cross_kernel_and_grads(samples, samples, bw);
  CHECK(self.k == gram_matrix(samples, bw).entries);

  // A point equal to a sample puts a 1 in that column.
  Eigen::MatrixXd probe = samples.row(4);
  const CrossKernel at_sample = cross_kernel_and_grads(probe, samples, bw);
  CHECK(at_sample.k(0, 4) == 1.0);

  const Eigen::MatrixXd points = testutil::random_matrix(9, 2, 62);
  const CrossKernel batch = cross_kernel_and_grads(points, samples, bw);
  CHECK(batch.k == cross_kernel(points, samples, bw));
  for (int n = 0; n < 9; ++n) {
    for (int m = 0; m < 17; ++m) {
      const Eigen::VectorXd x = points.row(n).transpose();
      const Eigen::VectorXd y = samples.row(m).transpose();
      CHECK(std::abs(batch.k(n, m) - rbf_eval(x, y, bw)) <= 1e-14);
      const Eigen::VectorXd grad = rbf_grad_first(x, y, bw);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(batch.dk[i](n, m) - grad[i]) <= 1e-14);
      }
    }
  }
}

TEST_CASE("batched kernels do not depend on the thread count") {
  const SampleMatrix samples = testutil::random_matrix(40, 2, 71);
  const Eigen::MatrixXd points = testutil::random_matrix(25, 2, 72);
  const Bandwidth bw = median_bandwidth(samples);

  Eigen::MatrixXd gram_serial, cross_serial;
  {
    ThreadLimitGuard guard(1);
    gram_serial = gram_matrix(samples, bw).entries;
    cross_serial = cross_kernel_and_grads(points, samples, bw).k;
  }
  {
    ThreadLimitGuard guard(4);
    CHECK(gram_matrix(samples, bw).entries == gram_serial);
    CHECK(cross_kernel_and_grads(points, samples, bw).k == cross_serial);
  }
}
