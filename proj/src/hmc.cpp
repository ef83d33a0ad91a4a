#include "ssge/hmc.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "ssge/errors.hpp"
#include "ssge/parallel.hpp"
#include "ssge/rng.hpp"
#include "ssge/score.hpp"
#include "ssge/stein.hpp"

namespace ssge {
namespace {

void validate(const HmcConfig& config) {
  if (!(config.step_lo > 0.0) || config.step_lo > config.step_hi) {
    throw std::invalid_argument("hmc: need 0 < step_lo <= step_hi");
  }
  if (config.leapfrog_lo < 1 || config.leapfrog_lo > config.leapfrog_hi) {
    throw std::invalid_argument("hmc: need 1 <= leapfrog_lo <= leapfrog_hi");
  }
  if (config.n_iterations < 1) {
    throw std::invalid_argument("hmc: n_iterations must be >= 1");
  }
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> leapfrog(
    const Eigen::VectorXd& position, const Eigen::VectorXd& momentum,
    const ScoreFn& score_fn, double step, int n_steps) {
  if (n_steps < 1 || !(step > 0.0)) {
    throw std::invalid_argument("leapfrog: need n_steps >= 1 and step > 0");
  }
  Eigen::VectorXd x = position;
  Eigen::VectorXd p = momentum + 0.5 * step * score_fn(position);
  for (int l = 0; l < n_steps; ++l) {
    x += step * p;
    if (l + 1 < n_steps) p += step * score_fn(x);
  }
  p += 0.5 * step * score_fn(x);
  return {std::move(x), std::move(p)};
}

HmcTrace hmc_chain(const Eigen::VectorXd& init, const ScoreFn& score_fn,
                   const LogDensityFn& logp_fn, const HmcConfig& config) {
  validate(config);
  const Eigen::Index d = init.size();
  double logp = logp_fn(init);
  if (!std::isfinite(logp)) {
    throw std::invalid_argument("hmc: log density not finite at init");
  }

  Rng rng(config.seed);
  HmcTrace trace;
  trace.states.resize(config.n_iterations, d);
  trace.accepted.resize(config.n_iterations);
  trace.n_nonfinite = 0;

  Eigen::VectorXd x = init;
  int n_accept = 0;
  for (int it = 0; it < config.n_iterations; ++it) {
    const Eigen::VectorXd p = rng.gaussian_vector(static_cast<int>(d));
    const double step = rng.uniform(config.step_lo, config.step_hi);
    const auto n_leap = static_cast<int>(
        rng.uniform_int(config.leapfrog_lo, config.leapfrog_hi));
    const double u = rng.uniform();

    auto [x_new, p_new] = leapfrog(x, p, score_fn, step, n_leap);
    const double logp_new = logp_fn(x_new);

    bool accept = false;
    if (!std::isfinite(logp_new)) {
      ++trace.n_nonfinite;
    } else {
      const double log_ratio =
          logp_new - logp + 0.5 * (p.squaredNorm() - p_new.squaredNorm());
      accept = std::log(u) < log_ratio;
    }
    if (accept) {
      x = std::move(x_new);
      logp = logp_new;
      ++n_accept;
    }
    trace.states.row(it) = x.transpose();
    trace.accepted[it] = accept;
  }
  trace.acceptance_ratio =
      static_cast<double>(n_accept) / static_cast<double>(config.n_iterations);
  return trace;
}

AcceptanceTable acceptance_comparison(const OracleDistribution& dist,
                                      const AcceptanceComparisonConfig& config,
                                      bool keep_traces) {
  if (config.n_repeats < 1) {
    throw std::invalid_argument("acceptance_comparison: n_repeats >= 1");
  }
  validate(config.hmc);

  std::vector<std::string> names{"true"};
  if (config.with_ssge) names.emplace_back("ssge");
  if (config.with_stein_plus) names.emplace_back("stein_plus");
  names.emplace_back("zero");
  const int n_rows = static_cast<int>(names.size());

  const LogDensityFn logp = [&dist](const Eigen::VectorXd& x) {
    return dist.log_density_unnormalized(x.transpose())[0];
  };
  const ScoreFn true_score = [&dist](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(dist.true_score(x.transpose()).row(0).transpose());
  };
  const ScoreFn zero_score = [&dist](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::VectorXd::Zero(dist.dim()));
  };

  AcceptanceTable table;
  table.rows.resize(n_rows);
  std::vector<std::vector<double>> ratios(
      n_rows, std::vector<double>(config.n_repeats, 0.0));
  if (keep_traces) {
    table.traces.resize(static_cast<std::size_t>(n_rows) * config.n_repeats);
  }

  // Repeats are independent; each refits the estimators on a fresh sample
  // set and reuses the same init and chain seed across estimator rows.
#pragma omp parallel for schedule(dynamic, 1) num_threads(ssge::max_threads())
  for (int rep = 0; rep < config.n_repeats; ++rep) {
    const std::uint64_t sample_seed = derive_seed(config.hmc.seed, 3 * rep);
    const std::uint64_t init_seed = derive_seed(config.hmc.seed, 3 * rep + 1);
    const std::uint64_t chain_seed = derive_seed(config.hmc.seed, 3 * rep + 2);

    const SampleMatrix fit_samples = dist.sample(config.fit_m, sample_seed);
    const Eigen::VectorXd init =
        dist.sample(1, init_seed).row(0).transpose();

    HmcConfig chain_config = config.hmc;
    chain_config.seed = chain_seed;

    for (int row = 0; row < n_rows; ++row) {
      const std::string& name = names[static_cast<std::size_t>(row)];
      ScoreFn fn;
      if (name == "true") {
        fn = true_score;
      } else if (name == "zero") {
        fn = zero_score;
      } else if (name == "ssge") {
        FitConfig fit_config;
        fit_config.rank = MassThreshold{config.r_bar};
        auto estimator =
            std::make_shared<ScoreEstimator>(fit(fit_samples, fit_config));
        fn = [estimator](const Eigen::VectorXd& x) {
          return Eigen::VectorXd(
              score(*estimator, x.transpose()).row(0).transpose());
        };
      } else {
        auto evaluator = std::make_shared<SteinPlusEvaluator>(
            fit_samples, config.eta, std::nullopt);
        fn = [evaluator](const Eigen::VectorXd& x) { return (*evaluator)(x); };
      }
      HmcTrace trace = hmc_chain(init, fn, logp, chain_config);
      ratios[static_cast<std::size_t>(row)][static_cast<std::size_t>(rep)] =
          trace.acceptance_ratio;
      if (keep_traces) {
        table.traces[static_cast<std::size_t>(row) * config.n_repeats + rep] =
            std::move(trace);
      }
    }
  }

  for (int row = 0; row < n_rows; ++row) {
    AcceptanceRow& out = table.rows[static_cast<std::size_t>(row)];
    out.estimator = names[static_cast<std::size_t>(row)];
    out.ratios = ratios[static_cast<std::size_t>(row)];
    double mean = 0.0;
    for (double r : out.ratios) mean += r;
    mean /= static_cast<double>(out.ratios.size());
    out.mean_acceptance = mean;
    out.std_acceptance = sample_std(out.ratios, mean);
  }
  return table;
}

}  // namespace ssge
