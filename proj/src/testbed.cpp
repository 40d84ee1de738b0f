#include "mfes/testbed.hpp"

#include "mfes/random.hpp"

#include <array>
#include <cmath>

namespace mfes {

void PlantParams::validate() const {
  if (!(dt > 0.0)) throw ConfigError("plant: dt must be > 0");
  if (!(warmup >= 0.0) || !(duration > warmup)) throw ConfigError("plant: need duration > warmup >= 0");
  if (!(fall_threshold > 0.0)) throw ConfigError("plant: fall_threshold must be > 0");
  if (!(actuator_lag > 0.0) || !(step_period > 0.0)) throw ConfigError("plant: lag and step period must be > 0");
  if (impulse_every < 1 || mean_window < 1) throw ConfigError("plant: impulse_every and mean_window must be >= 1");
  if (!(deadband_radius > 0.0) || !(process_noise_std >= 0.0)) throw ConfigError("plant: bad filter/noise constants");
}

void FidelitySpec::validate() const {
  base.validate();
  if (repetitions < 1) throw ConfigError("fidelity: repetitions must be >= 1");
  if (!(natural_freq_sq_bias > 0.0) || !(actuator_lag_bias > 0.0) || !(disturbance_bias >= 0.0) ||
      !(noise_scale >= 0.0))
    throw ConfigError("fidelity: biases must be positive");
}

PlantParams FidelitySpec::effective() const {
  PlantParams p = base;
  p.natural_freq_sq *= natural_freq_sq_bias;
  p.actuator_lag *= actuator_lag_bias;
  p.disturbance_amp *= disturbance_bias;
  p.process_noise_std *= noise_scale;
  return p;
}

FidelitySpec FidelitySpec::real_default() { return FidelitySpec{}; }

FidelitySpec FidelitySpec::sim_default() {
  FidelitySpec s;
  s.natural_freq_sq_bias = 1.15;
  s.actuator_lag_bias = 1.5;
  s.disturbance_bias = 0.9;
  s.noise_scale = 2.0;
  s.repetitions = 3;
  return s;
}

void Scenario::validate() const {
  if (static_cast<Eigen::Index>(gain_map.size()) != bounds.dim())
    throw ConfigError("scenario '" + name + "': gain map does not match bounds");
  if (reference.size() != bounds.dim() || !bounds.contains(reference))
    throw ConfigError("scenario '" + name + "': reference gains outside bounds");
}

Scenario Scenario::ankle2d() {
  Scenario s;
  s.name = "ankle2d";
  s.bounds = Bounds(ParamVector::Zero(2), ParamVector::Constant(2, 3.0));
  s.gain_map = {{CorrectiveAction::kAnkle, false, 40.0}, {CorrectiveAction::kAnkle, true, 5.0}};
  s.reference = (ParamVector(2) << 1.0, 1.0).finished();
  return s;
}

Scenario Scenario::arm_ankle4d() {
  Scenario s;
  s.name = "arm_ankle4d";
  s.bounds = Bounds(ParamVector::Zero(4), ParamVector::Constant(4, 3.0));
  s.gain_map = {{CorrectiveAction::kArm, false, 40.0},
                {CorrectiveAction::kArm, true, 5.0},
                {CorrectiveAction::kAnkle, false, 40.0},
                {CorrectiveAction::kAnkle, true, 5.0}};
  s.reference = (ParamVector(4) << 1.0, 1.0, 1.0, 1.0).finished();
  return s;
}

Scenario Scenario::by_name(const std::string& name) {
  if (name == "ankle2d") return ankle2d();
  if (name == "arm_ankle4d") return arm_ankle4d();
  throw ConfigError("unknown scenario '" + name + "' (expected ankle2d|arm_ankle4d)");
}

namespace {

struct AxisState {
  double theta = 0.0;
  double omega = 0.0;
  double action = 0.0;
};

struct Gains {
  double ankle_p = 0.0, ankle_d = 0.0, arm_p = 0.0, arm_d = 0.0;
};

Gains map_gains(const ParamVector& x, const Scenario& scenario) {
  Gains g;
  for (std::size_t i = 0; i < scenario.gain_map.size(); ++i) {
    const auto& slot = scenario.gain_map[i];
    const double k = x(static_cast<Eigen::Index>(i)) * slot.scale;
    if (slot.action == CorrectiveAction::kAnkle) {
      (slot.derivative ? g.ankle_d : g.ankle_p) = k;
    } else {
      (slot.derivative ? g.arm_d : g.arm_p) = k;
    }
  }
  return g;
}

// Causal moving average over a fixed window.
class MovingMean {
 public:
  explicit MovingMean(int window) : buf_(static_cast<std::size_t>(window), 0.0) {}
  double push(double v) {
    buf_[head_] = v;
    head_ = (head_ + 1) % buf_.size();
    if (count_ < buf_.size()) ++count_;
    double sum = 0.0;
    for (std::size_t i = 0; i < count_; ++i) sum += buf_[i];
    return sum / static_cast<double>(count_);
  }

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
};

}  // namespace

TrajectoryLog simulate(const ParamVector& x, const Scenario& scenario, const FidelitySpec& spec, std::uint64_t seed) {
  scenario.validate();
  spec.validate();
  if (!scenario.bounds.contains(x)) throw ConfigError("simulate: parameters outside scenario bounds");

  const PlantParams p = spec.effective();
  const Gains gains = map_gains(x, scenario);
  const auto steps = static_cast<long>(std::llround(p.duration / p.dt));
  const long warmup_steps = std::lround(p.warmup / p.dt);
  const std::array<double, 2> phase{0.0, std::numbers::pi / 2.0};
  const double noise_sd = p.process_noise_std / std::sqrt(p.dt);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);

  std::array<AxisState, 2> state{};
  std::array<MovingMean, 2> theta_filter{MovingMean(p.mean_window), MovingMean(p.mean_window)};
  std::array<MovingMean, 2> omega_filter{MovingMean(p.mean_window), MovingMean(p.mean_window)};

  TrajectoryLog log;
  log.dt = p.dt;
  for (auto* v : {&log.e_p_alpha, &log.e_p_beta, &log.d_alpha, &log.d_beta}) v->reserve(static_cast<std::size_t>(steps));

  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * p.dt;

    // Controller tick: filtered deviation -> PD activation.
    std::array<double, 2> target{};
    std::array<double, 2> e_p{};
    std::array<double, 2> rate{};
    for (int i = 0; i < 2; ++i) {
      const double mean_theta = theta_filter[i].push(state[i].theta);
      rate[i] = omega_filter[i].push(state[i].omega);
      e_p[i] = smooth_deadband(mean_theta, p.deadband_radius);
      target[i] = gains.ankle_p * e_p[i] + gains.ankle_d * rate[i];
    }
    const double arm = gains.arm_p * e_p[0] + gains.arm_d * rate[0];
    target[0] += kArmEffectiveness * arm;
    target[1] += kArmLeak * arm;

    log.e_p_alpha.push_back(p.log_scale * e_p[0]);
    log.e_p_beta.push_back(p.log_scale * e_p[1]);
    log.d_alpha.push_back(-p.log_scale * state[0].theta);
    log.d_beta.push_back(-p.log_scale * state[1].theta);

    for (int i = 0; i < 2; ++i) {
      const double eta = noise_sd * normal(rng);
      auto deriv = [&](const AxisState& s, double tt) {
        const double dist =
            tt >= p.warmup ? p.disturbance_amp * std::sin(2.0 * std::numbers::pi * tt / p.step_period + phase[i]) : 0.0;
        return AxisState{s.omega, p.natural_freq_sq * std::sin(s.theta) + dist - s.action + eta,
                         (target[i] - s.action) / p.actuator_lag};
      };
      auto axpy = [](const AxisState& s, double h, const AxisState& d) {
        return AxisState{s.theta + h * d.theta, s.omega + h * d.omega, s.action + h * d.action};
      };
      const AxisState& s0 = state[i];
      const AxisState k1 = deriv(s0, t);
      const AxisState k2 = deriv(axpy(s0, 0.5 * p.dt, k1), t + 0.5 * p.dt);
      const AxisState k3 = deriv(axpy(s0, 0.5 * p.dt, k2), t + 0.5 * p.dt);
      const AxisState k4 = deriv(axpy(s0, p.dt, k3), t + p.dt);
      const double h6 = p.dt / 6.0;
      state[i] = AxisState{s0.theta + h6 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
                           s0.omega + h6 * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega),
                           s0.action + h6 * (k1.action + 2.0 * k2.action + 2.0 * k3.action + k4.action)};
    }

    const long next = k + 1;
    if (next >= warmup_steps && next % p.impulse_every == 0) {
      for (auto& s : state) s.omega += coin(rng) ? p.impulse_amp : -p.impulse_amp;
    }
    if (std::abs(state[0].theta) > p.fall_threshold || std::abs(state[1].theta) > p.fall_threshold) {
      log.fell = true;
      log.fall_time = static_cast<double>(next) * p.dt;
      break;
    }
  }
  return log;
}

Testbed::Testbed(Scenario scenario, PenaltyParams penalty, CostPlane plane, FidelitySpec real, FidelitySpec sim)
    : scenario_(std::move(scenario)), penalty_(std::move(penalty)), plane_(plane), real_(real), sim_(sim) {
  scenario_.validate();
  penalty_.validate();
  real_.validate();
  sim_.validate();
  if (penalty_.x_max.size() != scenario_.dim()) throw ConfigError("testbed: penalty x_max dimension mismatch");
}

std::uint64_t Testbed::rollout_seed(std::uint64_t seed, int rep) {
  return derive_seed(seed, {static_cast<std::uint64_t>(rep)});
}

void Testbed::check(const ParamVector& x) const {
  if (!scenario_.bounds.contains(x)) throw ConfigError("evaluate: parameters outside scenario bounds");
}

Evaluation Testbed::evaluate_real(const ParamVector& x, std::uint64_t seed) const {
  check(x);
  const auto log = simulate(x, scenario_, real_, rollout_seed(seed, 0));
  return {cost_real(log, x, penalty_, plane_), log.fall_time.value_or(log.duration())};
}

Evaluation Testbed::evaluate_sim(const ParamVector& x, std::uint64_t seed) const {
  check(x);
  std::vector<TrajectoryLog> logs;
  Evaluation ev;
  for (int rep = 0; rep < sim_.repetitions; ++rep) {
    logs.push_back(simulate(x, scenario_, sim_, rollout_seed(seed, rep)));
    ev.experiment_time += logs.back().fall_time.value_or(logs.back().duration());
  }
  ev.cost = cost_sim_averaged(logs, x, penalty_, plane_);
  return ev;
}

Evaluation Testbed::evaluate(const ParamVector& x, Fidelity f, std::uint64_t seed) const {
  return f == Fidelity::kReal ? evaluate_real(x, seed) : evaluate_sim(x, seed);
}

}  // namespace mfes
