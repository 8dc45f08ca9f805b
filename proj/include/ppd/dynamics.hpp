#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "ppd/errors.hpp"
#include "ppd/liouvillian.hpp"
#include "ppd/state.hpp"

namespace ppd {

enum class PropagationMethod {
  automatic,  ///< dense exponential up to `dense_limit` coefficients, integrator above
  dense_exponential,
  integrator,
};

struct EvolveOptions {
  double tol = 1e-10;             ///< local error tolerance of the integrator path
  double tail_threshold = 1e-8;   ///< maximum allowed truncation_tail() during evolution
  PropagationMethod method = PropagationMethod::automatic;
  Eigen::Index dense_limit = 4096;
};

/// Population that can couple out of the truncated space: |e,n_max> is the
/// only level whose coherent partner |g,n_max+1> was cut away.
inline double truncation_tail(const DensityState& s) { return s.c_ee.back(); }

namespace detail {

inline void check_tail(double tail, double time, double threshold) {
  if (tail > threshold) throw TruncationError(time, tail, threshold);
}

/// x <- exp(G duration) x with an adaptive Dormand-Prince 5(4) integrator.
/// Raises TruncationError at the first accepted step whose tail exceeds
/// the threshold.
inline Eigen::VectorXd integrate_linear(const Liouvillian::SparseMatrix& G, const Eigen::VectorXd& x0,
                                        double duration, double tol, Eigen::Index tail_index,
                                        double tail_threshold, double t0) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  State x(x0.data(), x0.data() + x0.size());
  if (duration <= 0.0) return x0;
  auto rhs = [&G](const State& in, State& out, double) {
    Eigen::Map<const Eigen::VectorXd> vin(in.data(), static_cast<Eigen::Index>(in.size()));
    Eigen::Map<Eigen::VectorXd> vout(out.data(), static_cast<Eigen::Index>(out.size()));
    vout.noalias() = G * vin;
  };
  auto observer = [&](const State& s, double t) {
    check_tail(s[static_cast<std::size_t>(tail_index)], t0 + t, tail_threshold);
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol);
  odeint::integrate_adaptive(stepper, rhs, x, 0.0, duration, std::min(duration, 1e-3), observer);
  return Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace detail

/// exp(Lambda * duration) on packed coefficient vectors. The dense path
/// caches the matrix exponential so repeated application is one mat-vec.
class Propagator {
 public:
  Propagator(const Liouvillian& L, double duration, const EvolveOptions& opts = {})
      : generator_(L.generator()), n_max_(L.params().n_max), duration_(duration), opts_(opts) {
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw DomainError("duration must be finite and >= 0");
    if (!(opts.tol > 0.0)) throw DomainError("tol must be > 0");
    const bool dense = opts.method == PropagationMethod::dense_exponential ||
                       (opts.method == PropagationMethod::automatic && L.dimension() <= opts.dense_limit);
    if (dense) {
      const Eigen::MatrixXd A = L.dense_generator() * duration;
      matrix_ = A.exp();
    }
  }

  double duration() const { return duration_; }
  int n_max() const { return n_max_; }
  bool is_dense() const { return matrix_.has_value(); }
  const Eigen::MatrixXd& matrix() const { return *matrix_; }
  const EvolveOptions& options() const { return opts_; }

  /// Propagates `x`; `t0` is the absolute time of `x`, used in error reports.
  Eigen::VectorXd apply(const Eigen::VectorXd& x, double t0 = 0.0) const {
    const CoefficientLayout L{n_max_};
    const auto tail = L.ee(n_max_);
    detail::check_tail(x[tail], t0, opts_.tail_threshold);
    if (matrix_) {
      Eigen::VectorXd y = (*matrix_) * x;
      detail::check_tail(y[tail], t0 + duration_, opts_.tail_threshold);
      return y;
    }
    return detail::integrate_linear(generator_, x, duration_, opts_.tol, tail, opts_.tail_threshold, t0);
  }

  DensityState apply(const DensityState& s, double t0 = 0.0) const {
    return unpack(apply(pack(s), t0), n_max_);
  }

 private:
  Liouvillian::SparseMatrix generator_;
  int n_max_;
  double duration_;
  EvolveOptions opts_;
  std::optional<Eigen::MatrixXd> matrix_;
};

/// Free evolution exp(Lambda * duration) rho; no pump events.
inline DensityState evolve(const Liouvillian& L, const DensityState& s, double duration,
                           const EvolveOptions& opts = {}) {
  if (s.n_max != L.params().n_max) throw DomainError("state n_max does not match Liouvillian");
  if (duration == 0.0) return s;
  return Propagator(L, duration, opts).apply(s);
}

inline DensityState evolve(const Liouvillian& L, const DensityState& s, double duration, double tol) {
  EvolveOptions opts;
  opts.tol = tol;
  return evolve(L, s, duration, opts);
}

/// One pump cycle: free evolution over T/2 followed by the pump event.
class PeriodMap {
 public:
  explicit PeriodMap(const Liouvillian& L, const EvolveOptions& opts = {})
      : params_(L.params()), half_(L, L.params().pump_interval(), opts) {}

  const SystemParams& params() const { return params_; }
  const Propagator& propagator() const { return half_; }

  DensityState operator()(const DensityState& s, double t0 = 0.0) const { return pump_map(half_.apply(s, t0)); }

 private:
  SystemParams params_;
  Propagator half_;
};

inline DensityState period_map(const Liouvillian& L, const DensityState& s, const EvolveOptions& opts = {}) {
  return PeriodMap(L, opts)(s);
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct TrajectorySample {
  double t = 0.0;
  double mean_n = 0.0;
  double p_D_pre = 0.0;   ///< sum_n c_ee[n] of the sampled state
  double p_D_post = 0.0;  ///< sum_n (c_ee[n] + c_sese[n]): excited probability if pumped now
  std::vector<double> p_n;  ///< photon distribution, negative roundoff clamped to 0
  double trace = 0.0;
};

struct PumpEvent {
  int index = 0;  ///< 1-based event number
  double t = 0.0;
  DensityState before;
  DensityState after;
};

/// Samples at t = k (T/2) / samples_per_cycle. The sample at a pump instant
/// holds the pre-pump state; the post-pump state is in `events`.
struct Trajectory {
  SystemParams params;
  int samples_per_cycle = 1;
  std::vector<TrajectorySample> samples;
  std::vector<PumpEvent> events;
};

inline TrajectorySample make_sample(double t, const DensityState& s) {
  TrajectorySample out;
  out.t = t;
  out.p_n = photon_distribution(s);
  for (std::size_t n = 0; n < out.p_n.size(); ++n) {
    out.p_n[n] = std::max(0.0, out.p_n[n]);
    out.mean_n += static_cast<double>(n) * out.p_n[n];
    out.p_D_pre += s.c_ee[n];
    out.p_D_post += s.c_ee[n] + s.c_sese[n];
  }
  out.trace = trace(s);
  return out;
}

/// Alternates free evolution over T/2 and the pump map for `n_cycles` pump
/// events starting at t = 0 (first event at T/2).
inline Trajectory simulate(const Liouvillian& L, const DensityState& initial, int n_cycles, int samples_per_cycle,
                           const EvolveOptions& opts = {}) {
  if (n_cycles < 1) throw DomainError("n_cycles must be >= 1");
  if (samples_per_cycle < 1) throw DomainError("samples_per_cycle must be >= 1");
  if (initial.n_max != L.params().n_max) throw DomainError("state n_max does not match Liouvillian");

  const double half = L.params().pump_interval();
  const Propagator step(L, half / samples_per_cycle, opts);
  Trajectory traj;
  traj.params = L.params();
  traj.samples_per_cycle = samples_per_cycle;
  traj.samples.reserve(static_cast<std::size_t>(n_cycles) * samples_per_cycle + 1);
  traj.events.reserve(static_cast<std::size_t>(n_cycles));

  Eigen::VectorXd x = pack(initial);
  traj.samples.push_back(make_sample(0.0, initial));
  for (int c = 0; c < n_cycles; ++c) {
    for (int k = 1; k <= samples_per_cycle; ++k) {
      const double t_prev = (c + static_cast<double>(k - 1) / samples_per_cycle) * half;
      x = step.apply(x, t_prev);
      const double t = k == samples_per_cycle ? (c + 1) * half : (c + static_cast<double>(k) / samples_per_cycle) * half;
      traj.samples.push_back(make_sample(t, unpack(x, initial.n_max)));
    }
    PumpEvent ev;
    ev.index = c + 1;
    ev.t = (c + 1) * half;
    ev.before = unpack(x, initial.n_max);
    ev.after = pump_map(ev.before);
    x = pack(ev.after);
    traj.events.push_back(std::move(ev));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Stroboscopic fixed point
// ---------------------------------------------------------------------------

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  EvolveOptions evolve{};
};

struct FixedPointResult {
  DensityState state;  ///< post-pump state (last iterate when not converged)
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> residuals;  ///< TV distance between consecutive iterates
};

namespace detail {

/// Period map restricted to post-pump states, which only populate c_ee and
/// c_sese. Rows [ee(0..N) | se(0..N)] of the returned matrix give the next
/// post-pump state; `tail_row` gives pre-pump c_ee[n_max].
struct ReducedPeriodMap {
  Eigen::MatrixXd matrix;
  Eigen::RowVectorXd tail_row;
};

inline ReducedPeriodMap reduce(const Eigen::MatrixXd& E, int n_max) {
  const CoefficientLayout L{n_max};
  const Eigen::Index m = L.levels();
  ReducedPeriodMap r;
  r.matrix.resize(2 * m, 2 * m);
  r.tail_row.resize(2 * m);
  for (Eigen::Index j = 0; j < 2 * m; ++j) {
    const auto col = j < m ? L.ee(static_cast<int>(j)) : L.se(static_cast<int>(j - m));
    for (Eigen::Index n = 0; n < m; ++n) {
      r.matrix(n, j) = E(L.ee(static_cast<int>(n)), col) + E(L.se(static_cast<int>(n)), col);
      r.matrix(m + n, j) = E(L.gg(static_cast<int>(n)), col);
    }
    r.tail_row[j] = E(L.ee(n_max), col);
  }
  return r;
}

inline Eigen::VectorXd reduced_vector(const DensityState& s) {
  const auto m = static_cast<Eigen::Index>(s.levels());
  Eigen::VectorXd v(2 * m);
  for (Eigen::Index n = 0; n < m; ++n) {
    v[n] = s.c_ee[static_cast<std::size_t>(n)];
    v[m + n] = s.c_sese[static_cast<std::size_t>(n)];
  }
  return v;
}

inline DensityState from_reduced(const Eigen::VectorXd& v, int n_max) {
  auto s = DensityState::zero(n_max);
  const auto m = static_cast<Eigen::Index>(s.levels());
  for (Eigen::Index n = 0; n < m; ++n) {
    s.c_ee[static_cast<std::size_t>(n)] = v[n];
    s.c_sese[static_cast<std::size_t>(n)] = v[m + n];
  }
  return s;
}

}  // namespace detail

/// Power iteration of the period map from `start` (default |g,0><g,0|) until
/// the TV distance between consecutive iterates drops below `opts.tol`.
inline FixedPointResult fixed_point(const Liouvillian& L, const FixedPointOptions& opts = {},
                                    std::optional<DensityState> start = std::nullopt) {
  if (!(opts.tol > 0.0)) throw DomainError("fixed-point tol must be > 0");
  if (opts.max_iter < 1) throw DomainError("max_iter must be >= 1");
  const int N = L.params().n_max;
  const double half = L.params().pump_interval();
  const PeriodMap map(L, opts.evolve);

  FixedPointResult result;
  DensityState current = start.value_or(new_pure(DotLevel::Ground, 0, N));
  DensityState next = map(current);
  result.iterations = 1;
  result.residual = tv_distance(next, current);
  result.residuals.push_back(result.residual);
  current = std::move(next);
  if (result.residual < opts.tol) {
    result.state = std::move(current);
    result.converged = true;
    return result;
  }

  if (map.propagator().is_dense()) {
    const auto reduced = detail::reduce(map.propagator().matrix(), N);
    const double thr = opts.evolve.tail_threshold;
    const auto m = static_cast<Eigen::Index>(N) + 1;
    Eigen::VectorXd x = detail::reduced_vector(current);
    Eigen::VectorXd y(x.size());
    while (result.iterations < opts.max_iter) {
      const double t0 = result.iterations * half;
      detail::check_tail(x[m - 1], t0, thr);
      detail::check_tail(reduced.tail_row.dot(x), t0 + half, thr);
      y.noalias() = reduced.matrix * x;
      ++result.iterations;
      result.residual = 0.5 * (y - x).lpNorm<1>();
      result.residuals.push_back(result.residual);
      x.swap(y);
      if (result.residual < opts.tol) {
        result.converged = true;
        break;
      }
    }
    result.state = detail::from_reduced(x, N);
    return result;
  }

  while (result.iterations < opts.max_iter) {
    next = map(current, result.iterations * half);
    ++result.iterations;
    result.residual = tv_distance(next, current);
    result.residuals.push_back(result.residual);
    current = std::move(next);
    if (result.residual < opts.tol) {
      result.converged = true;
      break;
    }
  }
  result.state = std::move(current);
  return result;
}

/// Stationary post-pump state by a direct linear solve of (M - I) x = 0 with
/// unit trace, where M is the reduced period map. Dense path only; used as an
/// independent check of fixed_point().
inline DensityState fixed_point_direct(const Liouvillian& L, const EvolveOptions& opts = {}) {
  EvolveOptions dense = opts;
  dense.method = PropagationMethod::dense_exponential;
  dense.tail_threshold = std::numeric_limits<double>::infinity();
  const PeriodMap map(L, dense);
  const int N = L.params().n_max;
  const auto reduced = detail::reduce(map.propagator().matrix(), N);
  Eigen::MatrixXd A = reduced.matrix - Eigen::MatrixXd::Identity(reduced.matrix.rows(), reduced.matrix.cols());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(A.rows());
  A.row(0).setOnes();
  b[0] = 1.0;
  const Eigen::VectorXd x = A.fullPivLu().solve(b);
  return detail::from_reduced(x, N);
}

}  // namespace ppd
