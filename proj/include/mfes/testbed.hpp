#pragma once

#include "mfes/cost.hpp"
#include "mfes/types.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace mfes {

/// Two-axis torso-tilt plant walking in place, then forward under periodic disturbances.
struct PlantParams {
  double natural_freq_sq = 9.81 / 0.6;  // 1/s^2, destabilizing tilt feedback
  double actuator_lag = 0.05;           // s, first-order lag on the corrective action
  double disturbance_amp = 1.2;         // rad/s^2
  double step_period = 0.9;             // s
  double impulse_amp = 0.3;             // rad/s, velocity kick
  int impulse_every = 1000;             // integration steps between kicks (2 s at dt = 2 ms)
  double process_noise_std = 0.05;      // rad/s^2 per sqrt(s)
  double fall_threshold = 0.6;          // rad
  double dt = 0.002;                    // s
  double duration = 10.0;               // s
  double warmup = 3.0;                  // s of walking on the spot, no gait disturbance
  double deadband_radius = 0.02;        // rad
  int mean_window = 10;                 // samples
  double log_scale = 180.0 / std::numbers::pi;  // logged deviations are in degrees

  void validate() const;
};

/// Plant as seen at one fidelity: multiplicative bias on the base constants.
struct FidelitySpec {
  PlantParams base;
  double natural_freq_sq_bias = 1.0;
  double actuator_lag_bias = 1.0;
  double disturbance_bias = 1.0;
  double noise_scale = 1.0;
  int repetitions = 1;

  void validate() const;
  PlantParams effective() const;

  static FidelitySpec real_default();
  static FidelitySpec sim_default();
};

enum class CorrectiveAction { kAnkle, kArm };

/// Which controller gain an entry of the parameter vector drives, and its physical scale.
struct GainSlot {
  CorrectiveAction action = CorrectiveAction::kAnkle;
  bool derivative = false;
  double scale = 1.0;
};

struct Scenario {
  std::string name;
  Bounds bounds;
  std::vector<GainSlot> gain_map;
  ParamVector reference;  // hand-tuned comparison gains

  Eigen::Index dim() const noexcept { return bounds.dim(); }
  void validate() const;

  static Scenario ankle2d();
  static Scenario arm_ankle4d();
  static Scenario by_name(const std::string& name);
};

/// Arm action strength on the pitch axis and its leak into roll.
inline constexpr double kArmEffectiveness = 0.4;
inline constexpr double kArmLeak = 0.1;

TrajectoryLog simulate(const ParamVector& x, const Scenario& scenario, const FidelitySpec& spec, std::uint64_t seed);

struct Evaluation {
  CostBreakdown cost;
  double experiment_time = 0.0;  // walking seconds consumed, summed over repetitions
};

/// A scenario together with both fidelities and the cost definition.
class Testbed {
 public:
  Testbed(Scenario scenario, PenaltyParams penalty, CostPlane plane = CostPlane::kSummed,
          FidelitySpec real = FidelitySpec::real_default(), FidelitySpec sim = FidelitySpec::sim_default());

  Evaluation evaluate_real(const ParamVector& x, std::uint64_t seed) const;
  Evaluation evaluate_sim(const ParamVector& x, std::uint64_t seed) const;
  Evaluation evaluate(const ParamVector& x, Fidelity f, std::uint64_t seed) const;

  /// Seed of repetition `rep` of an evaluation; real runs use repetition 0.
  static std::uint64_t rollout_seed(std::uint64_t seed, int rep);

  const Scenario& scenario() const noexcept { return scenario_; }
  const PenaltyParams& penalty_params() const noexcept { return penalty_; }
  const FidelitySpec& real_spec() const noexcept { return real_; }
  const FidelitySpec& sim_spec() const noexcept { return sim_; }
  CostPlane plane() const noexcept { return plane_; }

 private:
  void check(const ParamVector& x) const;

  Scenario scenario_;
  PenaltyParams penalty_;
  CostPlane plane_;
  FidelitySpec real_;
  FidelitySpec sim_;
};

}  // namespace mfes
