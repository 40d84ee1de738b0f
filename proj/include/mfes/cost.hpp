#pragma once

#include "mfes/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mfes {

/// Cost assigned to any rollout that ends in a fall.
inline constexpr double kFallCost = 100.0;

/// Filtered tilt deviations from one rollout.
struct TrajectoryLog {
  double dt = 0.0;
  std::vector<double> e_p_alpha;  // deadbanded, mean-filtered deviation (pitch plane)
  std::vector<double> e_p_beta;   // same, roll plane
  std::vector<double> d_alpha;    // raw deviation, kept for deviation integrals
  std::vector<double> d_beta;
  bool fell = false;
  std::optional<double> fall_time;

  void validate() const;
  double duration() const noexcept { return dt * static_cast<double>(e_p_alpha.size()); }
};

/// Logistic regularizer on the gain magnitude.
struct PenaltyParams {
  double s = 7.5;
  double gamma = 6.0;
  double lambda = 0.75;
  ParamVector x_max;

  void validate() const;
};

enum class CostPlane { kAlpha, kBeta, kSummed };
CostPlane parse_cost_plane(const std::string& name);
const char* to_string(CostPlane p) noexcept;

struct CostBreakdown {
  double stability = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  bool fell = false;
};

double smooth_deadband(double v, double radius);

/// Causal sliding mean over the last min(W, k+1) samples.
std::vector<double> mean_filter(std::span<const double> series, int window);

/// Rectangle rule: dt * sum |e_k|.
double stability_integral(std::span<const double> series, double dt);

double penalty(const ParamVector& x, const PenaltyParams& p);

CostBreakdown cost_real(const TrajectoryLog& traj, const ParamVector& x, const PenaltyParams& p, CostPlane plane);

/// Mean stability integral over N rollouts plus one penalty; any fall yields kFallCost.
CostBreakdown cost_sim_averaged(std::span<const TrajectoryLog> trajs, const ParamVector& x, const PenaltyParams& p,
                                CostPlane plane);

}  // namespace mfes
