#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "ppd/params.hpp"
#include "ppd/state.hpp"

// Brute-force reference for the master equation on the full dot (x) field
// density matrix. Independent of the reduced-coefficient generator; used by
// the test suites only.

namespace ppd::oracle {

struct Operators {
  Eigen::MatrixXcd a;       ///< field annihilation, truncated at n_max
  Eigen::MatrixXcd s_plus;  ///< |e><g| (x) 1
  Eigen::MatrixXcd s_minus;
};

/// Operators in the dot-major (e, g, se) x (0..n_max) basis.
inline Operators build_operators(int n_max) {
  const Eigen::Index m = n_max + 1;
  Eigen::MatrixXcd a_field = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index n = 1; n < m; ++n) a_field(n - 1, n) = std::sqrt(static_cast<double>(n));
  Eigen::Matrix3cd sp = Eigen::Matrix3cd::Zero();
  sp(0, 1) = 1.0;  // |e><g|; |se> is annihilated by both S+ and S-

  auto kron = [](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
  };
  Operators ops;
  ops.a = kron(Eigen::MatrixXcd::Identity(3, 3), a_field);
  ops.s_plus = kron(sp, Eigen::MatrixXcd::Identity(m, m));
  ops.s_minus = ops.s_plus.adjoint();
  return ops;
}

/// Right-hand side g[a S+ - a^dag S-, rho] + kappa (a rho a^dag - 1/2 {a^dag a, rho}).
inline Eigen::MatrixXcd lindblad_rhs(const SystemParams& p, const Operators& ops, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd V = ops.a * ops.s_plus - ops.a.adjoint() * ops.s_minus;
  const Eigen::MatrixXcd n = ops.a.adjoint() * ops.a;
  return p.g * (V * rho - rho * V) + p.kappa * (ops.a * rho * ops.a.adjoint() - 0.5 * (n * rho + rho * n));
}

/// Integrates the full Lindblad equation with adaptive Dormand-Prince 5(4) at
/// absolute and relative tolerance `tol`.
inline Eigen::MatrixXcd dense_oracle_evolve(const SystemParams& p, const Eigen::MatrixXcd& rho0, double duration,
                                            double tol = 1e-13) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<std::complex<double>>;
  const Eigen::Index dim = 3 * (p.n_max + 1);
  if (rho0.rows() != dim || rho0.cols() != dim) throw DomainError("oracle: matrix dimension mismatch");
  const auto ops = build_operators(p.n_max);
  const Eigen::MatrixXcd V = ops.a * ops.s_plus - ops.a.adjoint() * ops.s_minus;
  const Eigen::MatrixXcd num = ops.a.adjoint() * ops.a;
  const Eigen::MatrixXcd a = ops.a;
  const Eigen::MatrixXcd ad = ops.a.adjoint();

  State x(rho0.data(), rho0.data() + rho0.size());
  if (duration <= 0.0) return rho0;
  auto rhs = [&](const State& in, State& out, double) {
    Eigen::Map<const Eigen::MatrixXcd> r(in.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> d(out.data(), dim, dim);
    d.noalias() = p.g * (V * r - r * V);
    d.noalias() += p.kappa * (a * r * ad);
    d.noalias() -= (0.5 * p.kappa) * (num * r + r * num);
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol);
  odeint::integrate_adaptive(stepper, rhs, x, 0.0, duration, 1e-4);
  return Eigen::Map<Eigen::MatrixXcd>(x.data(), dim, dim);
}

}  // namespace ppd::oracle
