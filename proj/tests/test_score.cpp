#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssge/experiments.hpp"
#include "ssge/oracles.hpp"
#include "ssge/ref.hpp"
#include "ssge/score.hpp"
#include "testutil.hpp"

using namespace ssge;

namespace {

const OracleDistribution& std_normal_1d() {
  static const OracleDistribution q = OracleDistribution::gaussian(
      Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
  return q;
}

}  // namespace

TEST_CASE("beta vanishes for a symmetric pair with an even eigenfunction") {
  SampleMatrix pair(2, 1);
  pair << -1.3, 1.3;
  FitConfig config;
  config.sigma = 1.0;
  config.rank = FixedRank{1};
  const ScoreEstimator estimator = fit(pair, config);
  CHECK(std::abs(estimator.beta(0, 0)) <= 1e-15);
}

TEST_CASE("fitted coefficients match the scalar triple-loop reference") {
  const SampleMatrix samples = std_normal_1d().sample(100, 140);
  FitConfig config;
  config.rank = FixedRank{6};
  const ScoreEstimator estimator = fit(samples, config);
  const Eigen::MatrixXd expected = ref::fit_beta(estimator.basis);
  CHECK(testutil::max_abs_diff(estimator.beta, expected) <= 1e-10);

  // Small multivariate instances as well.
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SampleMatrix small = testutil::random_matrix(20, 2, 150 + seed);
    FitConfig c2;
    c2.rank = MassThreshold{0.99};
    const ScoreEstimator est2 = fit(small, c2);
    CHECK(testutil::max_abs_diff(est2.beta, ref::fit_beta(est2.basis)) <=
          1e-10);
  }
}

TEST_CASE("duplicating every sample leaves the score function unchanged") {
  const SampleMatrix samples = std_normal_1d().sample(40, 160);
  SampleMatrix doubled(80, 1);
  doubled.topRows(40) = samples;
  doubled.bottomRows(40) = samples;

  FitConfig config;
  config.sigma = 1.2;  // fixed: duplication shifts the median slightly
  config.rank = FixedRank{4};
  const ScoreEstimator base = fit(samples, config);
  const ScoreEstimator twice = fit(doubled, config);

  const Eigen::MatrixXd points = testutil::random_matrix(30, 1, 161, 2.0);
  CHECK(testutil::max_abs_diff(score(base, points), score(twice, points)) <=
        1e-6);
}

TEST_CASE("score tracks -x for the standard normal") {
  const SampleMatrix samples = std_normal_1d().sample(100, 170);
  FitConfig config;
  config.rank = FixedRank{6};
  const ScoreEstimator estimator = fit(samples, config);
  Eigen::MatrixXd grid(5, 1);
  grid << -2.0, -1.0, 0.0, 1.0, 2.0;
  const Eigen::MatrixXd est = score(estimator, grid);
  CHECK(est(0, 0) > 0.0);   // at -2 the true score is +2
  CHECK(est(1, 0) > 0.0);
  CHECK(std::abs(est(2, 0)) < 0.25);
  CHECK(est(3, 0) < 0.0);
  CHECK(est(4, 0) < 0.0);
}

TEST_CASE("score decays to zero far away from every sample") {
  const SampleMatrix samples = std_normal_1d().sample(50, 180);
  FitConfig config;
  config.rank = MassThreshold{0.95};
  const ScoreEstimator estimator = fit(samples, config);
  Eigen::MatrixXd far(1, 1);
  far << 50.0;
  CHECK(std::abs(score(estimator, far)(0, 0)) <= 1e-100);
}

TEST_CASE("batched score equals per-point calls and is reproducible") {
  const SampleMatrix samples = testutil::random_matrix(30, 2, 190);
  FitConfig config;
  config.rank = MassThreshold{0.95};
  const ScoreEstimator estimator = fit(samples, config);
  const Eigen::MatrixXd points = testutil::random_matrix(9, 2, 191);
  const Eigen::MatrixXd batch = score(estimator, points);
  for (int n = 0; n < 9; ++n) {
    const Eigen::MatrixXd single = score(estimator, points.row(n));
    CHECK((batch.row(n) - single.row(0)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK(score(estimator, points) == batch);

  const Eigen::MatrixXd reference = ref::score(estimator, points);
  CHECK(testutil::max_abs_diff(batch, reference) <= 1e-10);
}

TEST_CASE("sign flips of eigenvector columns never change the score") {
  const SampleMatrix samples = testutil::random_matrix(25, 2, 200);
  FitConfig config;
  config.rank = MassThreshold{0.99};
  const ScoreEstimator estimator = fit(samples, config);
  const Eigen::MatrixXd points = testutil::random_matrix(7, 2, 201);
  const Eigen::MatrixXd baseline = score(estimator, points);

  for (int j = 0; j < estimator.basis.j_rank; ++j) {
    SpectralBasis flipped = estimator.basis;
    flipped.eigvecs.col(j) = -flipped.eigvecs.col(j);
    const ScoreEstimator refit = fit_from_basis(flipped);
    CHECK(refit.beta.row(j) == (-estimator.beta.row(j)).eval());
    CHECK(testutil::max_abs_diff(score(refit, points), baseline) <= 1e-12);
  }
}

TEST_CASE("weighted grid error shrinks from M=50 to M=400") {
  FitConfig config;
  config.rank = FixedRank{6};
  const Grid1d grid;
  double small_sum = 0.0;
  double large_sum = 0.0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    small_sum +=
        sweep_cell(std_normal_1d(), 50, derive_seed(210, s), config, grid)
            .weighted_mse;
    large_sum +=
        sweep_cell(std_normal_1d(), 400, derive_seed(211, s), config, grid)
            .weighted_mse;
  }
  CHECK(large_sum < small_sum);
}

TEST_CASE("estimated score is smallest at the mode (affine sanity)") {
  const double mu = 1.5;
  const double s = 0.7;
  const OracleDistribution q = OracleDistribution::gaussian(
      Eigen::VectorXd::Constant(1, mu), Eigen::VectorXd::Constant(1, s));
  std::vector<double> at_mode, at_sides;
  for (std::uint64_t seed = 0; seed < 11; ++seed) {
    const SampleMatrix samples = q.sample(100, derive_seed(220, seed));
    FitConfig config;
    config.rank = MassThreshold{0.95};
    const ScoreEstimator estimator = fit(samples, config);
    Eigen::MatrixXd probes(3, 1);
    probes << mu, mu - s, mu + s;
    const Eigen::MatrixXd est = score(estimator, probes);
    at_mode.push_back(std::abs(est(0, 0)));
    at_sides.push_back(std::min(std::abs(est(1, 0)), std::abs(est(2, 0))));
  }
  CHECK(testutil::median(at_mode) < testutil::median(at_sides));
}

TEST_CASE("stein residual: beta identity at the training samples") {
  const SampleMatrix samples = testutil::random_matrix(30, 2, 230);
  FitConfig config;
  config.rank = MassThreshold{0.95};
  const ScoreEstimator estimator = fit(samples, config);
  // (1/M) sum_m grad psi_j(x^m) = -beta_j by definition of the fit.
  const CoordSlices grads = nystrom_grad(estimator.basis, samples);
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd mean = grads[i].colwise().mean().transpose();
    CHECK((mean + estimator.beta.col(i)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("stein residual for the symmetric pair matches the hand formula") {
  const double a = 0.8;
  const double sigma = 1.1;
  SampleMatrix pair(2, 1);
  pair << -a, a;
  FitConfig config;
  config.sigma = sigma;
  config.rank = FixedRank{2};
  const ScoreEstimator estimator = fit(pair, config);
  REQUIRE(estimator.basis.j_rank == 2);

  const PointFn oracle = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-x / (a * a));  // score of N(0, a^2)
  };
  const Eigen::MatrixXd residual = stein_residual(estimator, oracle, pair);

  const double k = std::exp(-2.0 * a * a / (sigma * sigma));
  // Writing the two-term sums out: the even eigenfunction's residual
  // cancels; the odd one leaves 1/a - 2 a k / (sigma^2 (1 - k)).
  const double expected_odd =
      1.0 / a - 2.0 * a * k / (sigma * sigma * (1.0 - k));
  CHECK(std::abs(residual(0, 0)) <= 1e-12);
  CHECK(residual(1, 0) == doctest::Approx(expected_odd).epsilon(1e-10));
}

TEST_CASE("stein residual shrinks with more samples") {
  auto residual_magnitude = [](int m, int p, std::uint64_t seed) {
    const SampleMatrix samples = std_normal_1d().sample(m, seed);
    FitConfig config;
    config.rank = FixedRank{1};
    const ScoreEstimator estimator = fit(samples, config);
    const PointFn oracle = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(-x);
    };
    const SampleMatrix eval = std_normal_1d().sample(p, derive_seed(seed, 7));
    return std::abs(stein_residual(estimator, oracle, eval)(0, 0));
  };
  std::vector<double> coarse, fine;
  for (std::uint64_t s = 0; s < 10; ++s) {
    coarse.push_back(residual_magnitude(50, 500, derive_seed(240, s)));
    fine.push_back(residual_magnitude(400, 4000, derive_seed(241, s)));
  }
  CHECK(testutil::median(fine) < testutil::median(coarse));
}
