#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace mfes {

/// Controller gains being optimized (unitless, normalized).
using ParamVector = Eigen::VectorXd;

enum class Fidelity : int { kSim = 0, kReal = 1 };

inline double delta(Fidelity f) noexcept { return f == Fidelity::kReal ? 1.0 : 0.0; }
const char* to_string(Fidelity f) noexcept;
Fidelity parse_fidelity(const std::string& name);

/// Axis-aligned box. The upper corner doubles as x_max of the penalty term.
struct Bounds {
  ParamVector lower;
  ParamVector upper;

  Bounds() = default;
  Bounds(ParamVector lo, ParamVector hi);

  Eigen::Index dim() const noexcept { return lower.size(); }
  ParamVector center() const { return 0.5 * (lower + upper); }
  ParamVector range() const { return upper - lower; }
  bool contains(const ParamVector& x) const;
  ParamVector clip(const ParamVector& x) const;
  /// Maps a point of the unit cube onto the box.
  ParamVector from_unit(const ParamVector& u) const;
};

/// a = (delta, x): a parameter vector tagged with the fidelity it was (or would be) evaluated at.
struct AugmentedInput {
  Fidelity fidelity = Fidelity::kSim;
  ParamVector x;
};

struct Observation {
  AugmentedInput input;
  double y = 0.0;
};

/// Raised for malformed arguments and configurations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the Gram matrix cannot be factorized even after jitter escalation.
class ModelFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mfes
