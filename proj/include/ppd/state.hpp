#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ppd/errors.hpp"
#include "ppd/params.hpp"

namespace ppd {

using Complex = std::complex<double>;

/// Reduced density operator of dot (x) truncated Fock space.
///
/// Only the families that the master equation and the pump map can populate
/// are stored:
///
///   rho = sum_n  c_ee[n]   |e,n><e,n|
///              + c_gg[n]   |g,n><g,n|
///              + c_sese[n] |se,n><se,n|
///              + c_ge[n]   |g,n+1><e,n|  + h.c.
///
/// so `c_ge[n]` is the matrix element <g,n+1|rho|e,n>, and the element
/// <e,n|rho|g,n+1> is its conjugate. Population arrays have n_max + 1 entries,
/// the coherence array has n_max.
struct DensityState {
  int n_max = 1;
  std::vector<double> c_ee;
  std::vector<double> c_gg;
  std::vector<double> c_sese;
  std::vector<Complex> c_ge;

  /// All-zero state (trace 0).
  static DensityState zero(int n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    const auto levels = static_cast<std::size_t>(n_max) + 1;
    DensityState s;
    s.n_max = n_max;
    s.c_ee.assign(levels, 0.0);
    s.c_gg.assign(levels, 0.0);
    s.c_sese.assign(levels, 0.0);
    s.c_ge.assign(levels - 1, Complex{});
    return s;
  }

  std::size_t levels() const { return static_cast<std::size_t>(n_max) + 1; }

  bool operator==(const DensityState&) const = default;
};

/// Pure product state |dot, n><dot, n|.
inline DensityState new_pure(DotLevel dot, int n, int n_max) {
  if (n < 0 || n > n_max) {
    throw TruncationError("photon number " + std::to_string(n) + " outside [0, " +
                          std::to_string(n_max) + "]");
  }
  auto s = DensityState::zero(n_max);
  const auto i = static_cast<std::size_t>(n);
  switch (dot) {
    case DotLevel::Excited: s.c_ee[i] = 1.0; break;
    case DotLevel::Ground: s.c_gg[i] = 1.0; break;
    case DotLevel::SemiExcited: s.c_sese[i] = 1.0; break;
  }
  return s;
}

inline double trace(const DensityState& s) {
  double sum = 0.0;
  for (std::size_t n = 0; n < s.levels(); ++n) sum += s.c_ee[n] + s.c_gg[n] + s.c_sese[n];
  return sum;
}

/// Incoherent pump event: se -> e, g -> se, e -> e; all coherences dropped.
inline DensityState pump_map(const DensityState& s) {
  auto out = DensityState::zero(s.n_max);
  for (std::size_t n = 0; n < s.levels(); ++n) {
    out.c_ee[n] = s.c_sese[n] + s.c_ee[n];
    out.c_sese[n] = s.c_gg[n];
  }
  return out;
}

/// Photon-number distribution p_n (partial trace over the dot). Sums to
/// trace(s); entries are not clamped.
inline std::vector<double> photon_distribution(const DensityState& s) {
  std::vector<double> p(s.levels());
  for (std::size_t n = 0; n < s.levels(); ++n) p[n] = s.c_ee[n] + s.c_gg[n] + s.c_sese[n];
  return p;
}

/// Total excitation number Tr[(S+S- + a^dag a) rho].
inline double excitation_number(const DensityState& s) {
  double sum = 0.0;
  for (std::size_t n = 0; n < s.levels(); ++n) {
    const auto dn = static_cast<double>(n);
    sum += (dn + 1.0) * s.c_ee[n] + dn * (s.c_gg[n] + s.c_sese[n]);
  }
  return sum;
}

inline double mean_photon_number(const DensityState& s) {
  double sum = 0.0;
  for (std::size_t n = 0; n < s.levels(); ++n)
    sum += static_cast<double>(n) * (s.c_ee[n] + s.c_gg[n] + s.c_sese[n]);
  return sum;
}

// ---------------------------------------------------------------------------
// Packed real coefficient vector
// ---------------------------------------------------------------------------

/// Index layout of the packed real vector used by the generator:
/// [ee(0..N) | gg(0..N) | se(0..N) | Re c_ge(0..N-1) | Im c_ge(0..N-1)].
struct CoefficientLayout {
  int n_max;

  Eigen::Index levels() const { return n_max + 1; }
  Eigen::Index ee(int n) const { return n; }
  Eigen::Index gg(int n) const { return levels() + n; }
  Eigen::Index se(int n) const { return 2 * levels() + n; }
  Eigen::Index re(int n) const { return 3 * levels() + n; }
  Eigen::Index im(int n) const { return 3 * levels() + n_max + n; }
  Eigen::Index size() const { return 3 * levels() + 2 * n_max; }
};

inline Eigen::VectorXd pack(const DensityState& s) {
  const CoefficientLayout L{s.n_max};
  Eigen::VectorXd v(L.size());
  for (int n = 0; n <= s.n_max; ++n) {
    v[L.ee(n)] = s.c_ee[n];
    v[L.gg(n)] = s.c_gg[n];
    v[L.se(n)] = s.c_sese[n];
  }
  for (int n = 0; n < s.n_max; ++n) {
    v[L.re(n)] = s.c_ge[n].real();
    v[L.im(n)] = s.c_ge[n].imag();
  }
  return v;
}

inline DensityState unpack(const Eigen::Ref<const Eigen::VectorXd>& v, int n_max) {
  const CoefficientLayout L{n_max};
  if (v.size() != L.size()) throw DomainError("packed vector has wrong size");
  auto s = DensityState::zero(n_max);
  for (int n = 0; n <= n_max; ++n) {
    s.c_ee[n] = v[L.ee(n)];
    s.c_gg[n] = v[L.gg(n)];
    s.c_sese[n] = v[L.se(n)];
  }
  for (int n = 0; n < n_max; ++n) s.c_ge[n] = Complex{v[L.re(n)], v[L.im(n)]};
  return s;
}

/// Total-variation distance 1/2 sum |a_i - b_i| over the coefficient vectors
/// (coherences contribute their complex modulus).
inline double tv_distance(const DensityState& a, const DensityState& b) {
  if (a.n_max != b.n_max) throw DomainError("tv_distance: n_max mismatch");
  double sum = 0.0;
  for (std::size_t n = 0; n < a.levels(); ++n) {
    sum += std::abs(a.c_ee[n] - b.c_ee[n]) + std::abs(a.c_gg[n] - b.c_gg[n]) +
           std::abs(a.c_sese[n] - b.c_sese[n]);
  }
  for (std::size_t n = 0; n + 1 < a.levels(); ++n) sum += std::abs(a.c_ge[n] - b.c_ge[n]);
  return 0.5 * sum;
}

// ---------------------------------------------------------------------------
// Full-matrix embedding
// ---------------------------------------------------------------------------

/// Basis index in the full 3(n_max+1)-dimensional space. Ordering is
/// dot-major: (e, g, se) x (0 .. n_max).
inline Eigen::Index full_index(DotLevel dot, int n, int n_max) {
  const Eigen::Index block = n_max + 1;
  switch (dot) {
    case DotLevel::Excited: return n;
    case DotLevel::Ground: return block + n;
    case DotLevel::SemiExcited: return 2 * block + n;
  }
  return -1;
}

inline Eigen::MatrixXcd to_full_matrix(const DensityState& s) {
  const Eigen::Index dim = 3 * (s.n_max + 1);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n <= s.n_max; ++n) {
    const auto e = full_index(DotLevel::Excited, n, s.n_max);
    const auto g = full_index(DotLevel::Ground, n, s.n_max);
    const auto se = full_index(DotLevel::SemiExcited, n, s.n_max);
    rho(e, e) = s.c_ee[n];
    rho(g, g) = s.c_gg[n];
    rho(se, se) = s.c_sese[n];
  }
  for (int n = 0; n < s.n_max; ++n) {
    const auto g1 = full_index(DotLevel::Ground, n + 1, s.n_max);
    const auto e0 = full_index(DotLevel::Excited, n, s.n_max);
    rho(g1, e0) = s.c_ge[n];
    rho(e0, g1) = std::conj(s.c_ge[n]);
  }
  return rho;
}

/// Inverse of to_full_matrix: reads the ansatz entries and ignores the rest.
inline DensityState from_full_matrix(const Eigen::MatrixXcd& rho, int n_max) {
  const Eigen::Index dim = 3 * (n_max + 1);
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("full matrix has wrong dimension");
  auto s = DensityState::zero(n_max);
  for (int n = 0; n <= n_max; ++n) {
    s.c_ee[n] = rho(full_index(DotLevel::Excited, n, n_max), full_index(DotLevel::Excited, n, n_max)).real();
    s.c_gg[n] = rho(full_index(DotLevel::Ground, n, n_max), full_index(DotLevel::Ground, n, n_max)).real();
    s.c_sese[n] =
        rho(full_index(DotLevel::SemiExcited, n, n_max), full_index(DotLevel::SemiExcited, n, n_max)).real();
  }
  for (int n = 0; n < n_max; ++n)
    s.c_ge[n] = rho(full_index(DotLevel::Ground, n + 1, n_max), full_index(DotLevel::Excited, n, n_max));
  return s;
}

// ---------------------------------------------------------------------------
// Validity checks
// ---------------------------------------------------------------------------

struct ValidityTolerances {
  double trace = 1e-9;
  double negativity = 1e-12;
  double coherence = 1e-12;
};

/// True if `s` is a normalized, non-negative state whose 2x2 coherence blocks
/// are positive semidefinite.
inline bool is_valid(const DensityState& s, const ValidityTolerances& tol = {}) {
  if (std::abs(trace(s) - 1.0) > tol.trace) return false;
  for (std::size_t n = 0; n < s.levels(); ++n) {
    if (s.c_ee[n] < -tol.negativity || s.c_gg[n] < -tol.negativity || s.c_sese[n] < -tol.negativity)
      return false;
  }
  for (std::size_t n = 0; n + 1 < s.levels(); ++n) {
    if (std::norm(s.c_ge[n]) > s.c_ee[n] * s.c_gg[n + 1] + tol.coherence) return false;
  }
  return true;
}

}  // namespace ppd
