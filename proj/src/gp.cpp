#include "mfes/gp.hpp"

#include <cmath>
#include <string>

namespace mfes {

void RQKernelParams::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw ConfigError("rq kernel: variance must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("rq kernel: alpha must be > 0");
  if (lengthscales.size() == 0) throw ConfigError("rq kernel: lengthscales must be non-empty");
  if (!lengthscales.allFinite() || (lengthscales.array() <= 0.0).any())
    throw ConfigError("rq kernel: lengthscales must be > 0");
}

void MFModelParams::validate() const {
  k_sim.validate();
  k_eps.validate();
  if (k_sim.lengthscales.size() != k_eps.lengthscales.size())
    throw ConfigError("model: k_sim and k_eps dimensions differ");
  if (!(noise_sim >= 0.0) || !(noise_real >= 0.0)) throw ConfigError("model: noise must be >= 0");
  if (!std::isfinite(mu_sim) || !std::isfinite(mu_eps)) throw ConfigError("model: prior means must be finite");
}

double rq_kernel(const ParamVector& xi, const ParamVector& xj, const RQKernelParams& hp) {
  const auto d = hp.lengthscales.size();
  if (xi.size() != d || xj.size() != d) throw ConfigError("rq_kernel: dimension mismatch");
  if (!(hp.variance > 0.0) || !(hp.alpha > 0.0) || (hp.lengthscales.array() <= 0.0).any())
    throw ConfigError("rq_kernel: hyperparameters must be positive");
  const double r2 = ((xi - xj).array() / hp.lengthscales.array()).square().sum();
  return hp.variance * std::pow(1.0 + r2 / (2.0 * hp.alpha), -hp.alpha);
}

double mf_kernel(const AugmentedInput& ai, const AugmentedInput& aj, const MFModelParams& hp) {
  double k = rq_kernel(ai.x, aj.x, hp.k_sim);
  if (ai.fidelity == Fidelity::kReal && aj.fidelity == Fidelity::kReal) k += rq_kernel(ai.x, aj.x, hp.k_eps);
  return k;
}

double prior_mean(const AugmentedInput& a, const MFModelParams& hp) noexcept {
  return hp.mu_sim + delta(a.fidelity) * hp.mu_eps;
}

Eigen::MatrixXd gram_matrix(std::span<const AugmentedInput> inputs, const MFModelParams& hp) {
  const auto n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = mf_kernel(inputs[i], inputs[j], hp);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& m, double scale) {
  constexpr double kFirst = 1e-10;
  constexpr double kLast = 1e-4;
  JitteredCholesky out;
  if (m.rows() == 0) return out;
  Eigen::MatrixXd a = m;
  for (double rel = kFirst; rel <= kLast * 1.0000001; rel *= 10.0) {
    const double jitter = rel * scale;
    a.diagonal() = m.diagonal().array() + jitter;
    out.llt.compute(a);
    if (out.llt.info() == Eigen::Success && (out.llt.matrixLLT().diagonal().array() > 0.0).all()) {
      out.jitter = jitter;
      return out;
    }
  }
  throw ModelFitError("Gram matrix not positive definite after jitter escalation to " +
                      std::to_string(kLast * scale) + "; hyperparameters are ill-conditioned");
}

GPPosterior GPPosterior::fit(std::vector<Observation> obs, MFModelParams params) {
  params.validate();
  const auto d = params.dim();
  std::vector<AugmentedInput> inputs;
  inputs.reserve(obs.size());
  for (const auto& o : obs) {
    if (o.input.x.size() != d) throw ConfigError("fit: observation dimension mismatch");
    if (!o.input.x.allFinite() || !std::isfinite(o.y)) throw ConfigError("fit: non-finite observation");
    inputs.push_back(o.input);
  }

  GPPosterior post;
  const auto n = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd k = gram_matrix(inputs, params);
  Eigen::VectorXd centered(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = params.noise_std(obs[i].input.fidelity);
    k(i, i) += s * s;
    centered(i) = obs[i].y - prior_mean(obs[i].input, params);
  }
  if (n > 0) {
    auto chol = cholesky_with_jitter(k, params.k_sim.variance);
    post.factor_ = chol.llt.matrixL();
    post.weights_ = chol.llt.solve(centered);
    post.jitter_ = chol.jitter;
  }
  post.params_ = std::move(params);
  post.obs_ = std::move(obs);
  return post;
}

Eigen::VectorXd GPPosterior::cross_covariance(const AugmentedInput& q) const {
  Eigen::VectorXd k(static_cast<Eigen::Index>(obs_.size()));
  for (std::size_t i = 0; i < obs_.size(); ++i) k(static_cast<Eigen::Index>(i)) = mf_kernel(q, obs_[i].input, params_);
  return k;
}

Prediction GPPosterior::predict(const AugmentedInput& query) const {
  if (query.x.size() != params_.dim()) throw ConfigError("predict: query dimension mismatch");
  Prediction p;
  p.mean = prior_mean(query, params_);
  p.variance = mf_kernel(query, query, params_);
  if (obs_.empty()) return p;
  const Eigen::VectorXd ks = cross_covariance(query);
  p.mean += ks.dot(weights_);
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(ks);
  p.variance = std::max(0.0, p.variance - v.squaredNorm());
  return p;
}

JointPrediction GPPosterior::predict_joint(std::span<const AugmentedInput> queries) const {
  const auto m = static_cast<Eigen::Index>(queries.size());
  JointPrediction jp;
  jp.mean.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (queries[i].x.size() != params_.dim()) throw ConfigError("predict_joint: query dimension mismatch");
    jp.mean(i) = prior_mean(queries[i], params_);
  }
  jp.covariance = gram_matrix(queries, params_);
  if (obs_.empty()) return jp;

  Eigen::MatrixXd ks(static_cast<Eigen::Index>(obs_.size()), m);
  for (Eigen::Index i = 0; i < m; ++i) ks.col(i) = cross_covariance(queries[i]);
  jp.mean.noalias() += ks.transpose() * weights_;
  const Eigen::MatrixXd v = factor_.triangularView<Eigen::Lower>().solve(ks);
  jp.covariance.noalias() -= v.transpose() * v;
  for (Eigen::Index i = 0; i < m; ++i) jp.covariance(i, i) = std::max(0.0, jp.covariance(i, i));
  return jp;
}

}  // namespace mfes
