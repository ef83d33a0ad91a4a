#include "ssge/entropy.hpp"

#include <stdexcept>

#include "ssge/rng.hpp"

namespace ssge {

ReparamFamily location_scale_family(int d) {
  ReparamFamily family;
  family.noise_dim = d;
  family.param_dim = 2 * d;
  family.sample_dim = d;
  family.transform = [d](const Eigen::VectorXd& eps,
                         const Eigen::VectorXd& phi) {
    return Eigen::VectorXd(phi.head(d) + phi.tail(d).cwiseProduct(eps));
  };
  family.jacobian = [d](const Eigen::VectorXd& eps, const Eigen::VectorXd&) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * d, d);
    for (int i = 0; i < d; ++i) {
      jac(i, i) = 1.0;          // d f_i / d mu_i
      jac(d + i, i) = eps[i];   // d f_i / d s_i
    }
    return jac;
  };
  return family;
}

ReparamFamily location_family(int d) {
  ReparamFamily family;
  family.noise_dim = d;
  family.param_dim = d;
  family.sample_dim = d;
  family.transform = [](const Eigen::VectorXd& eps, const Eigen::VectorXd& phi) {
    return Eigen::VectorXd(phi + eps);
  };
  family.jacobian = [d](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d));
  };
  return family;
}

Eigen::VectorXd entropy_grad(const ReparamFamily& family,
                             const Eigen::VectorXd& phi,
                             const EntropyGradOptions& options) {
  if (options.n_noise < 2) {
    throw std::invalid_argument("entropy_grad needs at least 2 noise draws");
  }
  if (phi.size() != family.param_dim) {
    throw std::invalid_argument("entropy_grad: phi size mismatch");
  }
  const int n = options.n_noise;
  const int d = family.sample_dim;

  Rng rng(options.seed);
  Eigen::MatrixXd noise(n, family.noise_dim);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < family.noise_dim; ++c) noise(r, c) = rng.gaussian();
  }
  SampleMatrix samples(n, d);
  for (int r = 0; r < n; ++r) {
    samples.row(r) = family.transform(noise.row(r).transpose(), phi).transpose();
  }

  ScoreEstimator estimator = [&] {
    if (!options.fresh_fit_samples) return fit(samples, options.fit);
    Rng fit_rng(derive_seed(options.seed, 1));
    SampleMatrix fit_samples(n, d);
    for (int r = 0; r < n; ++r) {
      Eigen::VectorXd eps(family.noise_dim);
      for (int c = 0; c < family.noise_dim; ++c) eps[c] = fit_rng.gaussian();
      fit_samples.row(r) = family.transform(eps, phi).transpose();
    }
    return fit(fit_samples, options.fit);
  }();

  const Eigen::MatrixXd scores = score(estimator, samples);  // n x d
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(family.param_dim);
  for (int r = 0; r < n; ++r) {
    grad -= family.jacobian(noise.row(r).transpose(), phi) *
            scores.row(r).transpose();
  }
  return grad / static_cast<double>(n);
}

}  // namespace ssge
