#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "ssge/score.hpp"

namespace ssge {

// A reparameterizable family x = f(eps; phi), eps ~ N(0, I). The Jacobian is
// the (param_dim x sample_dim) matrix J(k, i) = d f_i / d phi_k.
struct ReparamFamily {
  int noise_dim;
  int param_dim;
  int sample_dim;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& eps,
                                const Eigen::VectorXd& phi)>
      transform;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd& eps,
                                const Eigen::VectorXd& phi)>
      jacobian;
};

// phi = [mu_1..mu_d, s_1..s_d], f(eps) = mu + s .* eps.
ReparamFamily location_scale_family(int d);

// phi = mu, f(eps) = mu + eps.
ReparamFamily location_family(int d);

struct EntropyGradOptions {
  int n_noise = 100;
  std::uint64_t seed = 0;
  FitConfig fit;
  // When true the score estimator is fitted on an independent second batch
  // of noise draws instead of the averaging batch (variance studies).
  bool fresh_fit_samples = false;
};

// Monte-Carlo estimate of grad_phi H(q_phi):
//   -(1/n) sum_m J_phi(eps^m) * g_hat(f(eps^m; phi)),
// with g_hat the spectral score estimate fitted on the transformed draws.
// Only the sample-space score enters; no parameter-score input exists.
Eigen::VectorXd entropy_grad(const ReparamFamily& family,
                             const Eigen::VectorXd& phi,
                             const EntropyGradOptions& options);

}  // namespace ssge
