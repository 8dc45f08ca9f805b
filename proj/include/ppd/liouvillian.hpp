#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ppd/params.hpp"
#include "ppd/state.hpp"

namespace ppd {

/// Generator of the damped Jaynes-Cummings master equation
///
///   d rho/dt = g [a S+ - a^dag S-, rho] + kappa (a rho a^dag - 1/2 {a^dag a, rho})
///
/// restricted to the reduced coefficient families of DensityState. With
/// s_n = sqrt(n+1) and c[n] = <g,n+1|rho|e,n> the closed system reads
///
///   ee[n]' = 2 g s_n Re c[n]            - kappa n ee[n] + kappa (n+1) ee[n+1]
///   gg[m]' = -2 g s_{m-1} Re c[m-1]     - kappa m gg[m] + kappa (m+1) gg[m+1]
///   se[n]' =                            - kappa n se[n] + kappa (n+1) se[n+1]
///   c[n]'  = g s_n (gg[n+1] - ee[n])    - kappa (n + 1/2) c[n]
///                                       + kappa sqrt((n+1)(n+2)) c[n+1]
///
/// where terms reaching beyond n_max are dropped (a^dag |n_max) = 0), which is
/// exactly the truncated-space master equation. The coherent source for c is
/// real, so Im c only decays.
class Liouvillian {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit Liouvillian(const SystemParams& params) : params_(params), layout_{params.n_max} {
    params_.validate();
    build();
  }

  const SystemParams& params() const { return params_; }
  const CoefficientLayout& layout() const { return layout_; }
  Eigen::Index dimension() const { return layout_.size(); }

  /// Generator acting on packed coefficient vectors.
  const SparseMatrix& generator() const { return generator_; }

  Eigen::MatrixXd dense_generator() const { return Eigen::MatrixXd(generator_); }

  /// d rho/dt for the given state.
  DensityState apply(const DensityState& s) const {
    if (s.n_max != params_.n_max) throw DomainError("state n_max does not match Liouvillian");
    Eigen::VectorXd v = generator_ * pack(s);
    return unpack(v, params_.n_max);
  }

 private:
  void build() {
    const int N = params_.n_max;
    const double g = params_.g;
    const double k = params_.kappa;
    const auto& L = layout_;
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(12 * (N + 1)));

    auto damp = [&](auto index_of) {
      for (int n = 0; n <= N; ++n) {
        if (n > 0) t.emplace_back(index_of(n), index_of(n), -k * n);
        if (n < N) t.emplace_back(index_of(n), index_of(n + 1), k * (n + 1));
      }
    };
    damp([&](int n) { return L.ee(n); });
    damp([&](int n) { return L.gg(n); });
    damp([&](int n) { return L.se(n); });

    for (int n = 0; n < N; ++n) {
      const double s = std::sqrt(n + 1.0);
      t.emplace_back(L.ee(n), L.re(n), 2.0 * g * s);
      t.emplace_back(L.gg(n + 1), L.re(n), -2.0 * g * s);
      t.emplace_back(L.re(n), L.gg(n + 1), g * s);
      t.emplace_back(L.re(n), L.ee(n), -g * s);
      for (auto part : {&CoefficientLayout::re, &CoefficientLayout::im}) {
        t.emplace_back((L.*part)(n), (L.*part)(n), -k * (n + 0.5));
        if (n + 1 < N) t.emplace_back((L.*part)(n), (L.*part)(n + 1), k * std::sqrt((n + 1.0) * (n + 2.0)));
      }
    }
    generator_.resize(L.size(), L.size());
    generator_.setFromTriplets(t.begin(), t.end());
    generator_.prune(0.0);
  }

  SystemParams params_;
  CoefficientLayout layout_;
  SparseMatrix generator_;
};

inline Liouvillian build_liouvillian(const SystemParams& params) { return Liouvillian(params); }

}  // namespace ppd
