#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppd/dynamics.hpp"
#include "ppd/errors.hpp"
#include "ppd/state.hpp"

namespace ppd {

enum class StatisticsClass { sub_poissonian, poissonian, super_poissonian };

inline const char* to_string(StatisticsClass c) {
  switch (c) {
    case StatisticsClass::sub_poissonian: return "sub-Poissonian";
    case StatisticsClass::poissonian: return "Poissonian";
    case StatisticsClass::super_poissonian: return "super-Poissonian";
  }
  return "unknown";
}

/// |Q| below this is reported as Poissonian.
inline constexpr double poissonian_band = 1e-6;

/// Mean photon numbers at or below this count as vacuum: Q is not reported.
inline constexpr double vacuum_mean = 1e-12;

struct PhotonStatistics {
  std::vector<double> p_n;
  double mean_n = 0.0;
  double variance = 0.0;
  std::optional<double> mandel_Q;  ///< empty when mean_n <= vacuum_mean
  std::optional<StatisticsClass> classification;
};

/// Moments of a photon distribution. Negative roundoff entries are clamped.
inline PhotonStatistics statistics(std::vector<double> p_n) {
  PhotonStatistics st;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t n = 0; n < p_n.size(); ++n) {
    p_n[n] = std::max(0.0, p_n[n]);
    const auto dn = static_cast<double>(n);
    m1 += dn * p_n[n];
    m2 += dn * dn * p_n[n];
  }
  st.p_n = std::move(p_n);
  st.mean_n = m1;
  st.variance = std::max(0.0, m2 - m1 * m1);
  if (m1 > vacuum_mean) {
    const double q = st.variance / m1 - 1.0;
    st.mandel_Q = q;
    if (std::abs(q) < poissonian_band)
      st.classification = StatisticsClass::poissonian;
    else
      st.classification = q < 0.0 ? StatisticsClass::sub_poissonian : StatisticsClass::super_poissonian;
  }
  return st;
}

inline PhotonStatistics statistics(const DensityState& s) { return statistics(photon_distribution(s)); }

/// Excited-dot probability of `s` as it stands, and the probability of an
/// excited dot right after a pump event applied to `s`.
struct ExcitationProbability {
  double current = 0.0;
  double after_pump = 0.0;
};

inline ExcitationProbability excitation_probability(const DensityState& s) {
  ExcitationProbability p;
  for (std::size_t n = 0; n < s.levels(); ++n) {
    p.current += s.c_ee[n];
    p.after_pump += s.c_sese[n] + s.c_ee[n];
  }
  return p;
}

/// Post-pump excited probability p_D of a converged fixed point. Applies two
/// further cycles and raises InconsistencyError if p_D drifts by more than
/// 10 * tol.
inline double stationary_p_D(const Liouvillian& L, const DensityState& fixed, double tol,
                             const EvolveOptions& opts = {}) {
  const PeriodMap map(L, opts);
  const double p0 = excitation_probability(fixed).current;
  const auto once = map(fixed);
  const auto twice = map(once);
  const double p1 = excitation_probability(once).current;
  const double p2 = excitation_probability(twice).current;
  const double drift = std::max(std::abs(p1 - p0), std::abs(p2 - p0));
  if (drift > 10.0 * tol) {
    throw InconsistencyError("p_D not stationary: drift " + std::to_string(drift) + " exceeds " +
                             std::to_string(10.0 * tol));
  }
  return p0;
}

/// Relative tolerance on the Rabi-angle condition of detect_trapping.
inline constexpr double rabi_angle_tolerance = 0.01;

/// Smallest photon number n* with tail mass sum_{n>n*} p_n < threshold whose
/// Rabi angle g (T/2) sqrt(n*+1) lies within 1% of a nonzero multiple of pi.
inline std::optional<int> detect_trapping(const std::vector<double>& p_n, double threshold, double g, double T) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("detect_trapping: threshold must be in (0, 1)");
  std::vector<double> tail(p_n.size() + 1, 0.0);  // tail[n] = sum_{k >= n} p_k
  for (std::size_t n = p_n.size(); n-- > 0;) tail[n] = tail[n + 1] + std::max(0.0, p_n[n]);
  for (std::size_t n = 0; n < p_n.size(); ++n) {
    if (!(tail[n + 1] < threshold)) continue;
    const double angle = g * 0.5 * T * std::sqrt(static_cast<double>(n) + 1.0);
    const double k = std::round(angle / std::numbers::pi);
    if (k >= 1.0 && std::abs(angle - k * std::numbers::pi) <= rabi_angle_tolerance * k * std::numbers::pi)
      return static_cast<int>(n);
  }
  return std::nullopt;
}

inline std::optional<int> detect_trapping(const std::vector<double>& p_n, double threshold, const SystemParams& p) {
  return detect_trapping(p_n, threshold, p.g, p.T);
}

/// Per-sample value of a named trajectory observable: mean_n, p_D_pre,
/// p_D_post, trace, or p_<k>.
inline double sample_value(const TrajectorySample& s, std::string_view name) {
  if (name == "mean_n") return s.mean_n;
  if (name == "p_D_pre") return s.p_D_pre;
  if (name == "p_D_post") return s.p_D_post;
  if (name == "trace") return s.trace;
  if (name.size() > 2 && name.substr(0, 2) == "p_") {
    const std::string digits(name.substr(2));
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const auto k = std::stoul(digits);
      if (k < s.p_n.size()) return s.p_n[k];
    }
  }
  throw DomainError("unknown observable '" + std::string(name) + "'");
}

/// Trapezoidal time average of `name` over pump cycles [first, last), i.e.
/// over t in [first T/2, last T/2].
inline double time_average(const Trajectory& traj, std::string_view name, int first_cycle, int last_cycle) {
  const int n_cycles = static_cast<int>(traj.events.size());
  if (first_cycle < 0 || last_cycle > n_cycles) throw DomainError("time_average: window outside trajectory");
  if (last_cycle <= first_cycle) throw DomainError("time_average: empty window");
  if (!traj.samples.empty()) (void)sample_value(traj.samples.front(), name);

  const auto spc = static_cast<std::size_t>(traj.samples_per_cycle);
  const std::size_t begin = static_cast<std::size_t>(first_cycle) * spc;
  const std::size_t end = static_cast<std::size_t>(last_cycle) * spc;
  double integral = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& a = traj.samples[i];
    const auto& b = traj.samples[i + 1];
    integral += 0.5 * (b.t - a.t) * (sample_value(a, name) + sample_value(b, name));
  }
  return integral / (traj.samples[end].t - traj.samples[begin].t);
}

}  // namespace ppd
