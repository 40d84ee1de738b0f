#include "mfes/types.hpp"

namespace mfes {

const char* to_string(Fidelity f) noexcept { return f == Fidelity::kReal ? "real" : "sim"; }

Fidelity parse_fidelity(const std::string& name) {
  if (name == "sim") return Fidelity::kSim;
  if (name == "real") return Fidelity::kReal;
  throw ConfigError("unknown fidelity '" + name + "' (expected sim|real)");
}

Bounds::Bounds(ParamVector lo, ParamVector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw ConfigError("bounds: lower/upper dimension mismatch or empty");
  if (!lower.allFinite() || !upper.allFinite()) throw ConfigError("bounds: non-finite entry");
  if ((lower.array() >= upper.array()).any()) throw ConfigError("bounds: lower must be < upper element-wise");
}

bool Bounds::contains(const ParamVector& x) const {
  if (x.size() != lower.size() || !x.allFinite()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

ParamVector Bounds::clip(const ParamVector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

ParamVector Bounds::from_unit(const ParamVector& u) const {
  return lower + u.cwiseProduct(upper - lower);
}

}  // namespace mfes
