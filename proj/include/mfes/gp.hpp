#pragma once

#include "mfes/types.hpp"

#include <Eigen/Cholesky>

#include <span>
#include <vector>

namespace mfes {

/// Rational Quadratic kernel hyperparameters with one lengthscale per dimension.
struct RQKernelParams {
  double variance = 1.0;  // sigma_k^2
  double alpha = 0.25;
  ParamVector lengthscales;

  void validate() const;
};

/// Hyperparameters of the two-level (simulation / real) model.
struct MFModelParams {
  RQKernelParams k_sim;
  RQKernelParams k_eps;
  double mu_sim = 0.0;
  double mu_eps = 0.0;
  double noise_sim = 0.05;   // observation noise std at delta = 0
  double noise_real = 0.05;  // observation noise std at delta = 1

  void validate() const;
  Eigen::Index dim() const noexcept { return k_sim.lengthscales.size(); }
  double noise_std(Fidelity f) const noexcept { return f == Fidelity::kReal ? noise_real : noise_sim; }
};

// sigma^2 (1 + r^2 / (2 alpha))^-alpha, r^2 the lengthscale-weighted squared distance.
double rq_kernel(const ParamVector& xi, const ParamVector& xj, const RQKernelParams& hp);

/// k_sim(xi, xj) + delta_i delta_j k_eps(xi, xj)
double mf_kernel(const AugmentedInput& ai, const AugmentedInput& aj, const MFModelParams& hp);

/// mu_sim + delta mu_eps
double prior_mean(const AugmentedInput& a, const MFModelParams& hp) noexcept;

Eigen::MatrixXd gram_matrix(std::span<const AugmentedInput> inputs, const MFModelParams& hp);

/// Cholesky factorization with the deterministic jitter ladder: 1e-10 * scale added
/// to the diagonal, multiplied by 10 per failure up to 1e-4 * scale.
struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};
JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& m, double scale);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

struct JointPrediction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Exact GP posterior over augmented inputs. Immutable once fitted.
class GPPosterior {
 public:
  static GPPosterior fit(std::vector<Observation> obs, MFModelParams params);

  Prediction predict(const AugmentedInput& query) const;
  JointPrediction predict_joint(std::span<const AugmentedInput> queries) const;

  const MFModelParams& params() const noexcept { return params_; }
  const std::vector<Observation>& observations() const noexcept { return obs_; }
  const Eigen::MatrixXd& cholesky_factor() const noexcept { return factor_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double jitter() const noexcept { return jitter_; }

 private:
  GPPosterior() = default;
  Eigen::VectorXd cross_covariance(const AugmentedInput& q) const;

  MFModelParams params_;
  std::vector<Observation> obs_;
  Eigen::MatrixXd factor_;  // lower triangular L with L L^T = K + diag(noise^2) + jitter
  Eigen::VectorXd weights_;
  double jitter_ = 0.0;
};

}  // namespace mfes
