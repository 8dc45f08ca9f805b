#include <gtest/gtest.h>

#include <random>

#include "ppd/liouvillian.hpp"
#include "ppd/oracle.hpp"
#include "test_support.hpp"

using namespace ppd;

TEST(Liouvillian, GroundVacuumIsDark) {
  const Liouvillian L({0.7, 0.3, 2.0, 4});
  const auto d = L.apply(new_pure(DotLevel::Ground, 0, 4));
  EXPECT_EQ(test_support::max_abs_diff(d, DensityState::zero(4)), 0.0);
}

TEST(Liouvillian, SemiExcitedVacuumIsDark) {
  const Liouvillian L({0.7, 0.3, 2.0, 4});
  const auto d = L.apply(new_pure(DotLevel::SemiExcited, 0, 4));
  EXPECT_EQ(test_support::max_abs_diff(d, DensityState::zero(4)), 0.0);
}

TEST(Liouvillian, DerivativeIsTraceless) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_max = 1 + trial % 10;
    const Liouvillian L({u(rng), u(rng), 1.0, n_max});
    EXPECT_NEAR(trace(L.apply(test_support::random_state(rng, n_max))), 0.0, 1e-12);
  }
}

TEST(Liouvillian, MatchesDenseLindbladAction) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n_max = 5;
  const auto ops = oracle::build_operators(n_max);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams p{u(rng), u(rng), 1.0, n_max};
    const Liouvillian L(p);
    const auto s = test_support::random_state(rng, n_max);
    const Eigen::MatrixXcd dense = oracle::lindblad_rhs(p, ops, to_full_matrix(s));
    const Eigen::MatrixXcd reduced = to_full_matrix(L.apply(s));
    worst = std::max(worst, (dense - reduced).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Liouvillian, DenseActionStaysInsideAnsatz) {
  // Entries outside the reduced families have zero derivative.
  std::mt19937_64 rng(4);
  const int n_max = 4;
  const SystemParams p{0.6, 0.4, 1.0, n_max};
  const auto ops = oracle::build_operators(n_max);
  const auto s = test_support::random_state(rng, n_max);
  Eigen::MatrixXcd d = oracle::lindblad_rhs(p, ops, to_full_matrix(s));
  d -= to_full_matrix(from_full_matrix(d, n_max));
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Liouvillian, SparsityIsBanded) {
  const Liouvillian L({1.0, 0.5, 1.0, 30});
  EXPECT_LT(L.generator().nonZeros(), 14 * 31);
}
