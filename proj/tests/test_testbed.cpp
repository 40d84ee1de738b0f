#include "mfes/random.hpp"
#include "mfes/testbed.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace mfes;

namespace {

ParamVector vec2(double a, double b) { return (ParamVector(2) << a, b).finished(); }

PenaltyParams penalty_for(const Scenario& s) {
  PenaltyParams p;
  p.x_max = s.bounds.upper;
  return p;
}

FidelitySpec quiet_real() {
  FidelitySpec f = FidelitySpec::real_default();
  f.base.disturbance_amp = 0.0;
  f.base.process_noise_std = 0.0;
  return f;
}

double sample_variance(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("equilibrium stays at rest without excitation") {
  auto f = quiet_real();
  f.base.impulse_amp = 0.0;
  const auto log = simulate(vec2(0.0, 0.0), Scenario::ankle2d(), f, 1);
  CHECK_FALSE(log.fell);
  CHECK(log.e_p_alpha.size() == 5000);
  for (std::size_t k = 0; k < log.e_p_alpha.size(); ++k) {
    CHECK(log.e_p_alpha[k] == 0.0);
    CHECK(log.e_p_beta[k] == 0.0);
  }

  PenaltyParams p = penalty_for(Scenario::ankle2d());
  const Testbed tb(Scenario::ankle2d(), p, CostPlane::kSummed, f, f);
  CHECK(tb.evaluate_real(vec2(0.0, 0.0), 3).cost.total < 1e-6);
}

TEST_CASE("rollouts are deterministic per seed") {
  const auto s = Scenario::arm_ankle4d();
  const auto a = simulate(s.reference, s, FidelitySpec::real_default(), 42);
  const auto b = simulate(s.reference, s, FidelitySpec::real_default(), 42);
  CHECK(a.e_p_alpha == b.e_p_alpha);
  CHECK(a.e_p_beta == b.e_p_beta);
  CHECK(a.d_alpha == b.d_alpha);
  CHECK(a.fell == b.fell);
  const auto c = simulate(s.reference, s, FidelitySpec::real_default(), 43);
  CHECK(a.e_p_alpha != c.e_p_alpha);
}

TEST_CASE("uncontrolled plant falls under default disturbances") {
  const auto s = Scenario::ankle2d();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto log = simulate(vec2(0.0, 0.0), s, FidelitySpec::real_default(), seed);
    CHECK(log.fell);
    REQUIRE(log.fall_time.has_value());
    CHECK(*log.fall_time < 10.0);
    CHECK(log.duration() == doctest::Approx(*log.fall_time).epsilon(1e-12));
  }
  const Testbed tb(s, penalty_for(s));
  CHECK(tb.evaluate_real(vec2(0.0, 0.0), 1).cost.total == kFallCost);
}

TEST_CASE("stabilizing gains settle near the deadband after a kick") {
  // With gait disturbance and noise off, the impulses are the only excitation.
  const auto s = Scenario::ankle2d();
  const auto f = quiet_real();
  const double band = f.base.deadband_radius * f.base.log_scale;
  for (const auto& x : {vec2(1.0, 1.0), vec2(1.75, 2.0), vec2(2.0, 1.5), vec2(3.0, 3.0)}) {
    const auto log = simulate(x, s, f, 7);
    CHECK_FALSE(log.fell);
    CHECK(std::abs(log.d_alpha.back()) < 2.0 * band);
    CHECK(std::abs(log.d_beta.back()) < 2.0 * band);
  }
}

TEST_CASE("doubling the disturbance never delays the fall") {
  const auto s = Scenario::ankle2d();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    double previous = std::numeric_limits<double>::infinity();
    for (double amp : {0.6, 1.2, 2.4, 4.8}) {
      auto f = FidelitySpec::real_default();
      f.base.disturbance_amp = amp;
      const auto log = simulate(vec2(0.0, 0.0), s, f, seed);
      REQUIRE(log.fell);
      CHECK(*log.fall_time <= previous);
      previous = *log.fall_time;
    }
  }
}

TEST_CASE("parameters outside the box are rejected") {
  const auto s = Scenario::ankle2d();
  const Testbed tb(s, penalty_for(s));
  CHECK_THROWS_AS(tb.evaluate_real(vec2(3.5, 1.0), 1), ConfigError);
  CHECK_THROWS_AS(tb.evaluate_sim(vec2(-0.1, 1.0), 1), ConfigError);
  CHECK_THROWS_AS(simulate(vec2(1.0, 4.0), s, FidelitySpec::real_default(), 1), ConfigError);
  CHECK_THROWS_AS(Scenario::by_name("hexapod"), ConfigError);
}

TEST_CASE("identity-bias single-rollout sim equals real") {
  const auto s = Scenario::ankle2d();
  FidelitySpec sim = FidelitySpec::real_default();
  const Testbed tb(s, penalty_for(s), CostPlane::kSummed, FidelitySpec::real_default(), sim);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CHECK(tb.evaluate_sim(s.reference, seed).cost.total == tb.evaluate_real(s.reference, seed).cost.total);
  }
}

TEST_CASE("simulation is systematically offset from the real plant") {
  const auto s = Scenario::ankle2d();
  const Testbed tb(s, penalty_for(s));
  std::vector<double> gap;
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
    gap.push_back(tb.evaluate_sim(s.reference, seed).cost.total - tb.evaluate_real(s.reference, seed).cost.total);
  const double mean = std::accumulate(gap.begin(), gap.end(), 0.0) / 50.0;
  const double stderr_ = std::sqrt(sample_variance(gap) / 50.0);
  CHECK(std::abs(mean) > 2.0 * stderr_);
}

TEST_CASE("averaged sim cost variance shrinks like 1/N") {
  const auto s = Scenario::ankle2d();
  const ParamVector x = vec2(1.75, 2.0);
  std::vector<double> var;
  for (int n : {1, 4, 16}) {
    FidelitySpec sim = FidelitySpec::sim_default();
    sim.repetitions = n;
    const Testbed tb(s, penalty_for(s), CostPlane::kSummed, FidelitySpec::real_default(), sim);
    std::vector<double> c;
    for (std::uint64_t set = 0; set < 200; ++set) {
      const auto ev = tb.evaluate_sim(x, derive_seed(99, {set, static_cast<std::uint64_t>(n)}));
      REQUIRE_FALSE(ev.cost.fell);
      c.push_back(ev.cost.total);
    }
    var.push_back(sample_variance(c));
  }
  // Expected ratio 4 each; 200 samples leave roughly 15% error on each ratio.
  CHECK(var[0] / var[1] > 2.5);
  CHECK(var[0] / var[1] < 6.4);
  CHECK(var[1] / var[2] > 2.5);
  CHECK(var[1] / var[2] < 6.4);
}

TEST_CASE("experiment time counts walking seconds") {
  const auto s = Scenario::ankle2d();
  const Testbed tb(s, penalty_for(s));
  CHECK(tb.evaluate_real(s.reference, 1).experiment_time == doctest::Approx(10.0));
  CHECK(tb.evaluate_sim(s.reference, 1).experiment_time == doctest::Approx(30.0));
  CHECK(tb.evaluate_real(vec2(0.0, 0.0), 1).experiment_time < 10.0);
}

TEST_CASE("arm gains couple into the roll axis") {
  const auto s = Scenario::arm_ankle4d();
  auto f = quiet_real();
  ParamVector x(4);
  x << 3.0, 0.0, 1.0, 1.0;
  ParamVector y(4);
  y << 0.0, 0.0, 1.0, 1.0;
  // Same excitation; only the arm differs, and it must change the beta response.
  CHECK(simulate(x, s, f, 5).d_beta != simulate(y, s, f, 5).d_beta);
}

TEST_CASE("fidelity specs validate") {
  auto f = FidelitySpec::sim_default();
  f.repetitions = 0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f = FidelitySpec::sim_default();
  f.base.warmup = 20.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  const auto e = FidelitySpec::sim_default().effective();
  CHECK(e.natural_freq_sq == doctest::Approx(9.81 / 0.6 * 1.15));
  CHECK(e.actuator_lag == doctest::Approx(0.075));
  CHECK(e.disturbance_amp == doctest::Approx(1.08));
  CHECK(e.process_noise_std == doctest::Approx(0.1));
}
