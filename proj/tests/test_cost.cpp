#include "mfes/cost.hpp"
#include "mfes/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mfes;

namespace {

PenaltyParams default_penalty(double xmax_norm = 4.0) {
  PenaltyParams p;
  p.x_max = ParamVector::Zero(2);
  p.x_max(0) = xmax_norm;
  return p;
}

ParamVector with_norm(double n) {
  ParamVector x(2);
  x << n * 0.6, n * 0.8;
  return x;
}

TrajectoryLog constant_log(double value, double seconds, double dt = 0.01) {
  TrajectoryLog t;
  t.dt = dt;
  const auto n = static_cast<std::size_t>(std::llround(seconds / dt));
  t.e_p_alpha.assign(n, value);
  t.e_p_beta.assign(n, 0.0);
  t.d_alpha.assign(n, value);
  t.d_beta.assign(n, 0.0);
  return t;
}

}  // namespace

TEST_CASE("smooth deadband values") {
  CHECK(smooth_deadband(0.0, 0.1) == 0.0);
  CHECK(std::abs(smooth_deadband(0.5, 0.1) - 0.400009079573740487) < 1e-15);
  Rng rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double v = u(rng);
    CHECK(smooth_deadband(-v, 0.1) == -smooth_deadband(v, 0.1));
    CHECK(std::abs(smooth_deadband(v, 0.1)) <= std::abs(v));
  }
  CHECK_THROWS_AS(smooth_deadband(1.0, 0.0), ConfigError);
}

TEST_CASE("deadband is monotone with slope approaching one") {
  double prev = smooth_deadband(-3.0, 0.05);
  for (double v = -3.0; v <= 3.0; v += 0.001) {
    const double cur = smooth_deadband(v, 0.05);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK((smooth_deadband(2.001, 0.05) - smooth_deadband(2.0, 0.05)) / 0.001 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mean filter") {
  const std::vector<double> s{0, 1, 2, 3};
  CHECK(mean_filter(s, 2) == std::vector<double>{0, 0.5, 1.5, 2.5});
  CHECK(mean_filter(s, 1) == s);
  const std::vector<double> c(20, 4.25);
  for (double v : mean_filter(c, 7)) CHECK(v == doctest::Approx(4.25).epsilon(1e-15));
  CHECK(mean_filter(std::vector<double>{}, 3).empty());
  CHECK_THROWS_AS(mean_filter(s, 0), ConfigError);
}

TEST_CASE("stability integral") {
  const std::vector<double> ones(300, 1.0);
  CHECK(std::abs(stability_integral(ones, 0.01) - 3.0) < 1e-12);
  CHECK(stability_integral(std::vector<double>(300, 0.0), 0.01) == 0.0);

  std::vector<double> s(300);
  for (int k = 0; k < 300; ++k) s[static_cast<std::size_t>(k)] = std::sin(2.0 * std::numbers::pi * k / 100.0);
  // Fine-grid quadrature of |sin(2 pi t)| over 3 s gives 6/pi.
  CHECK(std::abs(stability_integral(s, 0.01) - 6.0 / std::numbers::pi) < 1e-3);
  CHECK_THROWS_AS(stability_integral(ones, 0.0), ConfigError);
}

TEST_CASE("stability integral is additive over concatenation") {
  Rng rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(37 + trial), b(50);
    for (auto& v : a) v = n(rng);
    for (auto& v : b) v = n(rng);
    std::vector<double> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const double whole = stability_integral(ab, 0.002);
    CHECK(whole >= 0.0);
    CHECK(std::abs(whole - stability_integral(a, 0.002) - stability_integral(b, 0.002)) < 1e-12);
  }
}

TEST_CASE("penalty values") {
  const auto p = default_penalty();
  CHECK(std::abs(penalty(with_norm(0.75 * 4.0), p) - 3.75) < 1e-12);
  CHECK(std::abs(penalty(ParamVector::Zero(2), p) - 1.14224846345702617e-7) < 1e-20);
  CHECK(std::abs(penalty(with_norm(4.0), p) - 7.48145532632523919) < 1e-12);
}

TEST_CASE("penalty is monotone and bounded") {
  const auto p = default_penalty();
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double pa = penalty(with_norm(a), p), pb = penalty(with_norm(b), p);
    CHECK(pa <= pb);
    CHECK(pa >= 0.0);
    CHECK(pb <= p.s);
  }
}

TEST_CASE("penalty parameters are validated") {
  auto p = default_penalty();
  p.lambda = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = default_penalty();
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("cost_real") {
  const auto p = default_penalty();
  auto zero = constant_log(0.0, 3.0);
  CHECK(cost_real(zero, ParamVector::Zero(2), p, CostPlane::kAlpha).total < 1e-6);

  auto unit = constant_log(1.0, 3.0);
  const auto c = cost_real(unit, with_norm(3.0), p, CostPlane::kAlpha);
  CHECK(std::abs(c.total - 6.75) < 1e-12);
  CHECK(c.total == c.stability + c.penalty);
  CHECK(cost_real(unit, with_norm(3.0), p, CostPlane::kBeta).stability == 0.0);
  CHECK(std::abs(cost_real(unit, with_norm(3.0), p, CostPlane::kSummed).stability - 3.0) < 1e-12);

  unit.fell = true;
  unit.fall_time = 3.0;
  const auto f = cost_real(unit, with_norm(3.0), p, CostPlane::kAlpha);
  CHECK(f.fell);
  CHECK(f.total == kFallCost);
}

TEST_CASE("cost_sim_averaged") {
  const auto p = default_penalty();
  const auto one = constant_log(0.37, 2.0);
  const ParamVector x = with_norm(1.3);
  const std::vector<TrajectoryLog> single{one};
  CHECK(std::abs(cost_sim_averaged(single, x, p, CostPlane::kSummed).total -
                 cost_real(one, x, p, CostPlane::kSummed).total) < 1e-12);

  const std::vector<TrajectoryLog> same(5, one);
  CHECK(std::abs(cost_sim_averaged(same, x, p, CostPlane::kSummed).total -
                 cost_real(one, x, p, CostPlane::kSummed).total) < 1e-12);

  // Integrals 4 and 6; at the logistic midpoint with s = 1 the penalty is exactly 0.5.
  PenaltyParams q = p;
  q.s = 1.0;
  const ParamVector mid = with_norm(q.lambda * 4.0);
  const std::vector<TrajectoryLog> pair{constant_log(1.0, 4.0), constant_log(1.0, 6.0)};
  CHECK(std::abs(cost_sim_averaged(pair, mid, q, CostPlane::kAlpha).total - 5.5) < 1e-12);

  auto fallen = constant_log(1.0, 1.0);
  fallen.fell = true;
  fallen.fall_time = 1.0;
  const std::vector<TrajectoryLog> with_fall{one, fallen, one};
  CHECK(cost_sim_averaged(with_fall, x, p, CostPlane::kSummed).total == kFallCost);
  CHECK_THROWS_AS(cost_sim_averaged(std::vector<TrajectoryLog>{}, x, p, CostPlane::kSummed), ConfigError);
}

TEST_CASE("trajectory validation") {
  auto t = constant_log(1.0, 1.0);
  t.e_p_beta.pop_back();
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = constant_log(1.0, 1.0);
  t.dt = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("cost plane names round-trip") {
  for (auto p : {CostPlane::kAlpha, CostPlane::kBeta, CostPlane::kSummed}) CHECK(parse_cost_plane(to_string(p)) == p);
  CHECK_THROWS_AS(parse_cost_plane("diagonal"), ConfigError);
}
