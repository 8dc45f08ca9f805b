#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "ppd/io.hpp"
#include "ppd/state.hpp"
#include "test_support.hpp"

using namespace ppd;

TEST(NewPure, ExcitedVacuum) {
  const auto s = new_pure(DotLevel::Excited, 0, 5);
  EXPECT_EQ(s.c_ee[0], 1.0);
  EXPECT_EQ(trace(s), 1.0);
  for (std::size_t n = 1; n < s.levels(); ++n) EXPECT_EQ(s.c_ee[n], 0.0);
  for (double x : s.c_gg) EXPECT_EQ(x, 0.0);
  for (double x : s.c_sese) EXPECT_EQ(x, 0.0);
  for (auto c : s.c_ge) EXPECT_EQ(c, Complex{});
  EXPECT_EQ(s.c_ge.size(), 5u);
}

TEST(NewPure, GroundTwoPhotons) {
  const auto s = new_pure(DotLevel::Ground, 2, 5);
  auto expected = DensityState::zero(5);
  expected.c_gg[2] = 1.0;
  EXPECT_EQ(s, expected);
}

TEST(NewPure, OutOfRangeRaisesTruncationError) {
  EXPECT_THROW(new_pure(DotLevel::Excited, 6, 5), TruncationError);
  EXPECT_THROW(new_pure(DotLevel::Excited, -1, 5), TruncationError);
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace(DensityState::zero(3)), 0.0);
  for (auto dot : {DotLevel::Excited, DotLevel::Ground, DotLevel::SemiExcited})
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(trace(new_pure(dot, n, 4)), 1.0);

  auto s = DensityState::zero(5);
  s.c_ee[0] = 0.5;
  s.c_sese[3] = 0.5;
  EXPECT_EQ(trace(s), 1.0);
}

TEST(PumpMap, RuleTable) {
  const int N = 5;
  for (int n = 0; n <= N; ++n) {
    EXPECT_EQ(pump_map(new_pure(DotLevel::Ground, n, N)), new_pure(DotLevel::SemiExcited, n, N));
    EXPECT_EQ(pump_map(new_pure(DotLevel::SemiExcited, n, N)), new_pure(DotLevel::Excited, n, N));
    EXPECT_EQ(pump_map(new_pure(DotLevel::Excited, n, N)), new_pure(DotLevel::Excited, n, N));
  }
}

TEST(PumpMap, DropsCoherences) {
  auto s = DensityState::zero(3);
  s.c_ee[0] = 0.5;
  s.c_gg[1] = 0.5;
  s.c_ge[0] = 0.3;
  const auto out = pump_map(s);
  EXPECT_EQ(out.c_ge[0], Complex{});
  EXPECT_EQ(out.c_ee[0], 0.5);
  EXPECT_EQ(out.c_sese[1], 0.5);
  EXPECT_EQ(out.c_gg[1], 0.0);
}

TEST(PumpMap, PropertiesOnRandomStates) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = test_support::random_state(rng, 1 + trial % 8);
    const auto p = pump_map(s);
    EXPECT_NEAR(trace(p), trace(s), 1e-15 * static_cast<double>(s.levels()));
    for (std::size_t n = 0; n < p.levels(); ++n) EXPECT_EQ(p.c_gg[n], 0.0);
    for (auto c : p.c_ge) EXPECT_EQ(c, Complex{});
    // Two events move every population into the excited dot.
    const auto pp = pump_map(p);
    for (std::size_t n = 0; n < pp.levels(); ++n) {
      EXPECT_EQ(pp.c_sese[n], 0.0);
      EXPECT_NEAR(pp.c_ee[n], s.c_ee[n] + s.c_gg[n] + s.c_sese[n], 1e-15);
    }
  }
}

TEST(PhotonDistribution, Examples) {
  const auto p = photon_distribution(new_pure(DotLevel::Excited, 2, 4));
  EXPECT_EQ(p, (std::vector<double>{0, 0, 1, 0, 0}));

  auto s = DensityState::zero(3);
  s.c_ee[0] = 0.5;
  s.c_gg[1] = 0.5;
  EXPECT_EQ(photon_distribution(s), (std::vector<double>{0.5, 0.5, 0, 0}));
}

TEST(PhotonDistribution, SumsToTraceForUnnormalizedStates) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = test_support::random_state(rng, 6);
    const double k = scale(rng);
    for (auto* v : {&s.c_ee, &s.c_gg, &s.c_sese})
      for (auto& x : *v) x *= k;
    const auto p = photon_distribution(s);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), trace(s), 1e-14);
  }
}

TEST(FullMatrix, SingleDiagonalEntryForPureState) {
  const auto rho = to_full_matrix(new_pure(DotLevel::Excited, 0, 1));
  ASSERT_EQ(rho.rows(), 6);
  EXPECT_EQ(rho(0, 0), Complex(1.0));
  EXPECT_EQ(rho.cwiseAbs().sum(), 1.0);
}

TEST(FullMatrix, CoherencePlacement) {
  auto s = DensityState::zero(1);
  s.c_ee[0] = 0.5;
  s.c_gg[1] = 0.5;
  s.c_ge[0] = Complex(0.2, 0.1);
  const auto rho = to_full_matrix(s);
  const auto g1 = full_index(DotLevel::Ground, 1, 1);
  const auto e0 = full_index(DotLevel::Excited, 0, 1);
  EXPECT_EQ(g1, 3);
  EXPECT_EQ(e0, 0);
  EXPECT_EQ(rho(g1, e0), Complex(0.2, 0.1));
  EXPECT_EQ(rho(e0, g1), Complex(0.2, -0.1));
}

TEST(FullMatrix, RoundTripHermitianPositive) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_max = 1 + trial % 6;
    const auto s = test_support::random_state(rng, n_max);
    const auto rho = to_full_matrix(s);
    EXPECT_EQ(from_full_matrix(rho, n_max), s);
    EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-300);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    EXPECT_TRUE(is_valid(s));
  }
}

TEST(PackedVector, RoundTrip) {
  std::mt19937_64 rng(5);
  const auto s = test_support::random_state(rng, 4);
  EXPECT_EQ(unpack(pack(s), 4), s);
  EXPECT_EQ(pack(s).size(), CoefficientLayout{4}.size());
}

TEST(StateJson, RoundTripAndErrors) {
  std::mt19937_64 rng(9);
  const auto s = test_support::random_state(rng, 5);
  const auto text = io::to_json(s).dump();
  EXPECT_EQ(io::state_from_json(io::json::parse(text)), s);

  auto bad = io::to_json(s);
  bad["c_ee"] = std::vector<double>{1.0};
  EXPECT_THROW(io::state_from_json(bad), Error);
  bad = io::to_json(s);
  bad.erase("c_gg");
  EXPECT_THROW(io::state_from_json(bad), Error);
}

TEST(Validity, DetectsViolations) {
  auto s = new_pure(DotLevel::Excited, 0, 2);
  EXPECT_TRUE(is_valid(s));
  s.c_ge[0] = 0.1;  // c_gg[1] == 0, so any coherence breaks positivity
  EXPECT_FALSE(is_valid(s));
  s = new_pure(DotLevel::Excited, 0, 2);
  s.c_ee[0] = 1.1;
  s.c_gg[0] = -0.1;
  EXPECT_FALSE(is_valid(s));
}
