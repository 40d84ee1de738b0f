#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// library's GP or sampler code paths.

#include "mfes/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace mfes::oracle {

struct Rq {
  double variance;
  double alpha;
  std::vector<double> ls;
};

inline double rq(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Rq& k) {
  double r2 = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    const double z = (a(d) - b(d)) / k.ls[static_cast<std::size_t>(d)];
    r2 += z * z;
  }
  return k.variance / std::pow(1.0 + r2 / (2.0 * k.alpha), k.alpha);
}

struct Point {
  int delta;
  Eigen::VectorXd x;
};

struct Model {
  Rq sim, eps;
  double mu_sim, mu_eps, noise_sim, noise_real;
  double k(const Point& a, const Point& b) const { return rq(a.x, b.x, sim) + a.delta * b.delta * rq(a.x, b.x, eps); }
  double mu(const Point& a) const { return mu_sim + a.delta * mu_eps; }
};

/// Posterior mean/variance by forming the dense system and solving it with full-pivot LU.
/// `jitter` is added to the diagonal on top of the noise variance.
inline std::pair<double, double> dense_predict(const Model& m, const std::vector<Point>& xs,
                                               const std::vector<double>& ys, const Point& q, double jitter = 0.0) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd r(n), ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = m.k(xs[i], xs[j]);
    const double s = xs[i].delta ? m.noise_real : m.noise_sim;
    k(i, i) += s * s + jitter;
    r(i) = ys[static_cast<std::size_t>(i)] - m.mu(xs[i]);
    ks(i) = m.k(q, xs[i]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  const Eigen::VectorXd a = lu.solve(r);
  const Eigen::VectorXd b = lu.solve(ks);
  return {m.mu(q) + ks.dot(a), m.k(q, q) - ks.dot(b)};
}

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(argmin = k) for independent Gaussians by composite Simpson quadrature.
inline std::vector<double> independent_argmin_probs(const std::vector<double>& mean, const std::vector<double>& sd) {
  const std::size_t n = mean.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    auto f = [&](double t) {
      double v = normal_pdf((t - mean[k]) / sd[k]) / sd[k];
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) v *= 1.0 - normal_cdf((t - mean[j]) / sd[j]);
      return v;
    };
    const double lo = mean[k] - 12.0 * sd[k], hi = mean[k] + 12.0 * sd[k];
    const int steps = 20000;
    const double h = (hi - lo) / steps;
    double s = f(lo) + f(hi);
    for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    p[k] = s * h / 3.0;
  }
  return p;
}

}  // namespace mfes::oracle
