#include "mfes/cost.hpp"

#include <cmath>

namespace mfes {

namespace {

double plane_integral(const TrajectoryLog& traj, CostPlane plane) {
  switch (plane) {
    case CostPlane::kAlpha: return stability_integral(traj.e_p_alpha, traj.dt);
    case CostPlane::kBeta: return stability_integral(traj.e_p_beta, traj.dt);
    case CostPlane::kSummed:
      return stability_integral(traj.e_p_alpha, traj.dt) + stability_integral(traj.e_p_beta, traj.dt);
  }
  return 0.0;
}

}  // namespace

void TrajectoryLog::validate() const {
  if (!(dt > 0.0)) throw ConfigError("trajectory: dt must be > 0");
  if (e_p_alpha.size() != e_p_beta.size()) throw ConfigError("trajectory: series lengths differ");
  if (fell && !fall_time) throw ConfigError("trajectory: fall without fall time");
}

void PenaltyParams::validate() const {
  if (!(s > 0.0) || !(gamma > 0.0)) throw ConfigError("penalty: s and gamma must be > 0");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("penalty: lambda must be in (0, 1]");
  if (x_max.size() == 0 || !x_max.allFinite()) throw ConfigError("penalty: x_max must be non-empty and finite");
}

CostPlane parse_cost_plane(const std::string& name) {
  if (name == "alpha") return CostPlane::kAlpha;
  if (name == "beta") return CostPlane::kBeta;
  if (name == "summed") return CostPlane::kSummed;
  throw ConfigError("unknown cost plane '" + name + "' (expected alpha|beta|summed)");
}

const char* to_string(CostPlane p) noexcept {
  switch (p) {
    case CostPlane::kAlpha: return "alpha";
    case CostPlane::kBeta: return "beta";
    case CostPlane::kSummed: return "summed";
  }
  return "summed";
}

double smooth_deadband(double v, double radius) {
  if (!(radius > 0.0)) throw ConfigError("smooth_deadband: radius must be > 0");
  return v - radius * std::tanh(v / radius);
}

std::vector<double> mean_filter(std::span<const double> series, int window) {
  if (window < 1) throw ConfigError("mean_filter: window must be >= 1");
  std::vector<double> out(series.size());
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t k = 0; k < series.size(); ++k) {
    // Summed fresh each step so long runs do not accumulate rounding drift.
    const std::size_t first = k + 1 >= w ? k + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t i = first; i <= k; ++i) sum += series[i];
    out[k] = sum / static_cast<double>(k + 1 - first);
  }
  return out;
}

double stability_integral(std::span<const double> series, double dt) {
  if (!(dt > 0.0)) throw ConfigError("stability_integral: dt must be > 0");
  double sum = 0.0;
  for (double e : series) sum += std::abs(e);
  return dt * sum;
}

double penalty(const ParamVector& x, const PenaltyParams& p) {
  if (x.size() != p.x_max.size()) throw ConfigError("penalty: dimension mismatch");
  return p.s / (1.0 + std::exp(-p.gamma * (x.norm() - p.lambda * p.x_max.norm())));
}

CostBreakdown cost_real(const TrajectoryLog& traj, const ParamVector& x, const PenaltyParams& p, CostPlane plane) {
  traj.validate();
  CostBreakdown c;
  c.stability = plane_integral(traj, plane);
  c.penalty = penalty(x, p);
  c.fell = traj.fell;
  c.total = traj.fell ? kFallCost : c.stability + c.penalty;
  return c;
}

CostBreakdown cost_sim_averaged(std::span<const TrajectoryLog> trajs, const ParamVector& x, const PenaltyParams& p,
                                CostPlane plane) {
  if (trajs.empty()) throw ConfigError("cost_sim_averaged: empty rollout list");
  CostBreakdown c;
  for (const auto& t : trajs) {
    t.validate();
    c.stability += plane_integral(t, plane);
    c.fell = c.fell || t.fell;
  }
  c.stability /= static_cast<double>(trajs.size());
  c.penalty = penalty(x, p);
  c.total = c.fell ? kFallCost : c.stability + c.penalty;
  return c;
}

}  // namespace mfes
