#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "ppd/errors.hpp"

namespace ppd {

/// Physical constants of the pumped dot + cavity. Rates and times share one
/// arbitrary unit; only g/kappa and g*T matter.
struct SystemParams {
  double g = 1.0;      ///< dot-field coupling rate
  double kappa = 0.0;  ///< cavity damping rate
  double T = 1.0;      ///< pump period (one electron + hole cycle)
  int n_max = 1;       ///< highest retained photon number

  /// Spacing between consecutive pump events (t_i = T/2, T, 3T/2, ...).
  double pump_interval() const { return 0.5 * T; }

  /// Throws DomainError naming the first violated field.
  void validate() const {
    if (!std::isfinite(g) || g < 0.0) throw DomainError("g must be finite and >= 0");
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("kappa must be finite and >= 0");
    if (!std::isfinite(T) || T <= 0.0) throw DomainError("T must be finite and > 0");
    if (n_max < 1) throw DomainError("n_max must be >= 1");
  }
};

enum class DotLevel { Excited, Ground, SemiExcited };

inline std::string_view to_string(DotLevel level) {
  switch (level) {
    case DotLevel::Excited: return "excited";
    case DotLevel::Ground: return "ground";
    case DotLevel::SemiExcited: return "semi_excited";
  }
  return "unknown";
}

inline DotLevel dot_level_from_string(std::string_view name) {
  if (name == "excited" || name == "e") return DotLevel::Excited;
  if (name == "ground" || name == "g") return DotLevel::Ground;
  if (name == "semi_excited" || name == "se") return DotLevel::SemiExcited;
  throw DomainError("unknown dot level '" + std::string(name) + "'");
}

}  // namespace ppd
