#pragma once

#include <algorithm>
#include <cmath>

#include "ppd/errors.hpp"

// Closed-form photon-train results for a dot that is re-excited once per
// period while the field stays within {|0), |1)}.

namespace ppd::analytic {

enum class Regime { overdamped, critical, underdamped };

/// Relative width of the band around 4g = kappa treated as critical.
inline constexpr double critical_band = 1e-9;

struct TrainParams {
  double g = 0.1;
  double kappa = 1.0;
  double T = 1.0;

  TrainParams() = default;
  TrainParams(double g_, double kappa_, double T_) : g(g_), kappa(kappa_), T(T_) { validate(); }

  void validate() const {
    if (!std::isfinite(g) || g <= 0.0) throw DomainError("g must be > 0");
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("kappa must be >= 0");
    if (!std::isfinite(T) || T <= 0.0) throw DomainError("T must be > 0");
  }

  /// kappa^2 - 16 g^2, the signed discriminant.
  double discriminant() const { return kappa * kappa - 16.0 * g * g; }

  Regime regime() const {
    const double d = discriminant();
    const double scale = std::max(kappa * kappa, 16.0 * g * g);
    if (std::abs(d) < critical_band * scale) return Regime::critical;
    return d > 0.0 ? Regime::overdamped : Regime::underdamped;
  }

  /// sqrt(|kappa^2 - 16 g^2|).
  double beta() const { return std::sqrt(std::abs(discriminant())); }

  double phi() const { return std::atan(kappa / (2.0 * g)); }
};

/// Photon probability after a single excitation at t = 0:
///   8g^2/(kappa^2 - 16g^2) e^{-kappa t/2} (cosh(t/2 sqrt(kappa^2 - 16g^2)) - 1).
/// The underdamped branch is the analytic continuation cosh(ix) = cos(x); near
/// 4g = kappa a series expansion replaces the removable singularity.
inline double p1(double t, const TrainParams& p) {
  if (!(t >= 0.0)) throw DomainError("p1: t must be >= 0");
  const double g2 = p.g * p.g;
  switch (p.regime()) {
    case Regime::critical: {
      // cosh(x) - 1 = x^2/2 + x^4/24 + ...  with x^2 = d t^2 / 4
      const double d = p.discriminant();
      return g2 * t * t * std::exp(-0.5 * p.kappa * t) * (1.0 + d * t * t / 48.0);
    }
    case Regime::overdamped: {
      // e^{-kt/2}(cosh(bt/2) - 1) = 1/2 e^{(b-k)t/2} (1 - e^{-bt/2})^2
      const double b = p.beta();
      const double m1 = std::expm1(-0.5 * b * t);
      return 4.0 * g2 / (b * b) * std::exp(0.5 * (b - p.kappa) * t) * m1 * m1;
    }
    case Regime::underdamped: {
      const double w = p.beta();
      const double s = std::sin(0.25 * w * t);
      return 16.0 * g2 / (w * w) * std::exp(-0.5 * p.kappa * t) * s * s;
    }
  }
  return 0.0;
}

/// Heaviside step with Theta(0) = 0.
inline double theta(double x) { return x > 0.0 ? 1.0 : 0.0; }

/// Periodic train sum_m p1(t - mT) Theta(T - |2t - (2m+1)T|). Pulse m lives
/// on the open window (mT, (m+1)T); window edges evaluate to 0.
inline double photon_train(double t, const TrainParams& p) {
  if (!(t >= 0.0)) throw DomainError("photon_train: t must be >= 0");
  const double m0 = std::floor(t / p.T);
  double sum = 0.0;
  for (double m = std::max(0.0, m0 - 1.0); m <= m0 + 1.0; m += 1.0) {
    const double window = theta(p.T - std::abs(2.0 * t - (2.0 * m + 1.0) * p.T));
    if (window > 0.0) sum += p1(t - m * p.T, p);
  }
  return sum;
}

/// Stationary mean photon number 1/(kappa T).
inline double mean_photon_number(const TrainParams& p) {
  if (!(p.kappa > 0.0)) throw DomainError("mean_photon_number: kappa must be > 0");
  return 1.0 / (p.kappa * p.T);
}

/// First-order coherence sqrt(1 + kappa^2/4g^2) e^{-kappa|tau|/2} cos(g|tau| + phi).
inline double g1(double tau, const TrainParams& p) {
  const double a = std::abs(tau);
  const double x = p.kappa / (2.0 * p.g);
  return std::sqrt(1.0 + x * x) * std::exp(-0.5 * p.kappa * a) * std::cos(p.g * a + p.phi());
}

/// Late-time decay rate predicted for p1, 4g^2/kappa.
inline double long_time_rate(const TrainParams& p) {
  if (!(p.kappa > 0.0)) throw DomainError("long_time_rate: kappa must be > 0");
  return 4.0 * p.g * p.g / p.kappa;
}

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::overdamped: return "overdamped";
    case Regime::critical: return "critical";
    case Regime::underdamped: return "underdamped";
  }
  return "unknown";
}

}  // namespace ppd::analytic
