#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ppd/observables.hpp"
#include "test_support.hpp"

using namespace ppd;

TEST(Statistics, TwoPoint) {
  const auto st = statistics(std::vector<double>{0.5, 0.5});
  EXPECT_DOUBLE_EQ(st.mean_n, 0.5);
  EXPECT_DOUBLE_EQ(st.variance, 0.25);
  ASSERT_TRUE(st.mandel_Q);
  EXPECT_DOUBLE_EQ(*st.mandel_Q, -0.5);
  EXPECT_EQ(st.classification, StatisticsClass::sub_poissonian);
}

TEST(Statistics, FockStateIsMinusOne) {
  for (int n = 1; n <= 6; ++n) {
    const auto st = statistics(new_pure(DotLevel::Ground, n, 6));
    ASSERT_TRUE(st.mandel_Q);
    EXPECT_DOUBLE_EQ(*st.mandel_Q, -1.0);
    EXPECT_EQ(st.variance, 0.0);
  }
}

TEST(Statistics, TruncatedPoissonIsPoissonian) {
  const double lambda = 0.5;
  std::vector<double> p(21);
  double term = std::exp(-lambda);
  for (int n = 0; n <= 20; ++n) {
    p[n] = term;
    term *= lambda / (n + 1);
  }
  const auto st = statistics(p);
  ASSERT_TRUE(st.mandel_Q);
  EXPECT_LT(std::abs(*st.mandel_Q), 1e-6);
  EXPECT_EQ(st.classification, StatisticsClass::poissonian);
}

TEST(Statistics, GeometricIsSuperPoissonian) {
  const double x = 0.4;
  std::vector<double> p(200);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = (1 - x) * std::pow(x, static_cast<double>(n));
  const auto st = statistics(p);
  // Thermal light: Q equals the mean.
  EXPECT_NEAR(*st.mandel_Q, x / (1 - x), 1e-12);
  EXPECT_EQ(st.classification, StatisticsClass::super_poissonian);
}

TEST(Statistics, VacuumHasNoQ) {
  const auto st = statistics(new_pure(DotLevel::Excited, 0, 4));
  EXPECT_EQ(st.mean_n, 0.0);
  EXPECT_FALSE(st.mandel_Q);
  EXPECT_FALSE(st.classification);
}

TEST(Statistics, RoundoffVacuumHasNoQ) {
  const auto st = statistics(std::vector<double>{1.0, 1e-16, 0.0, 1e-16});
  EXPECT_FALSE(st.mandel_Q);
  EXPECT_TRUE(statistics(std::vector<double>{1.0 - 1e-9, 1e-9}).mandel_Q);
}

TEST(Statistics, QBoundedBelowOnRandomStates) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto st = statistics(test_support::random_state(rng, 1 + trial % 10));
    if (st.mandel_Q) EXPECT_GE(*st.mandel_Q, -1.0 - 1e-12);
  }
}

TEST(ExcitationProbability, Examples) {
  for (int n = 0; n <= 3; ++n) {
    const auto e = excitation_probability(new_pure(DotLevel::Excited, n, 3));
    EXPECT_EQ(e.current, 1.0);
    EXPECT_EQ(e.after_pump, 1.0);
    const auto se = excitation_probability(new_pure(DotLevel::SemiExcited, n, 3));
    EXPECT_EQ(se.current, 0.0);
    EXPECT_EQ(se.after_pump, 1.0);
    const auto g = excitation_probability(new_pure(DotLevel::Ground, n, 3));
    EXPECT_EQ(g.current, 0.0);
    EXPECT_EQ(g.after_pump, 0.0);
  }
}

TEST(ExcitationProbability, ConsistentWithPumpMap) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = test_support::random_state(rng, 1 + trial % 7);
    EXPECT_EQ(excitation_probability(s).after_pump, excitation_probability(pump_map(s)).current);
  }
}

TEST(StationaryPD, DecoupledLimit) {
  const Liouvillian L({0.0, 1.0, 1.0, 4});
  EXPECT_EQ(stationary_p_D(L, new_pure(DotLevel::Excited, 0, 4), 1e-10), 1.0);
}

TEST(StationaryPD, RejectsNonStationaryInput) {
  const Liouvillian L({1.0, 0.5, 1.0, 6});
  EXPECT_THROW((void)stationary_p_D(L, new_pure(DotLevel::Excited, 3, 6), 1e-10), InconsistencyError);
}

TEST(StationaryPD, ConstantAtFixedPoint) {
  const Liouvillian L({1.0, 0.5, 1.3, 16});
  const auto fp = fixed_point(L);
  ASSERT_TRUE(fp.converged);
  const double pd = stationary_p_D(L, fp.state, 1e-10);
  EXPECT_GT(pd, 0.0);
  EXPECT_LE(pd, 1.0);
}

TEST(StationaryPD, TrappingConfiguration) {
  const Liouvillian L({1.0, 1e-4, 2.0 * std::numbers::pi, 10});
  const auto fp = fixed_point(L);
  ASSERT_TRUE(fp.converged);
  EXPECT_NEAR(stationary_p_D(L, fp.state, 1e-10), 1.0, 0.01);
}

TEST(DetectTrapping, MassBelowFourAtTwoPi) {
  const double g = 1.0;
  const double T = 2.0 * std::numbers::pi / g;  // g (T/2) sqrt(4) = 2 pi
  const std::vector<double> p{0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 0.0};
  EXPECT_EQ(detect_trapping(p, 1e-2, g, T), 3);
}

TEST(DetectTrapping, FlatTailGivesNone) {
  const std::vector<double> p(50, 1.0 / 50);
  EXPECT_FALSE(detect_trapping(p, 1e-2, 1.0, 2.0 * std::numbers::pi));
}

TEST(DetectTrapping, AngleConditionRequired) {
  const std::vector<double> p{1.0, 0.0, 0.0};
  EXPECT_EQ(detect_trapping(p, 1e-2, 1.0, 2.0 * std::numbers::pi), 0);
  EXPECT_EQ(detect_trapping(p, 1e-2, 1.0, 2.0 * std::numbers::pi * 1.009), 0);
  EXPECT_FALSE(detect_trapping(p, 1e-2, 1.0, 2.0 * std::numbers::pi * 1.02));
  // Zero angle is not a Rabi cycle.
  EXPECT_FALSE(detect_trapping(p, 1e-2, 1e-9, 1.0));
}

TEST(DetectTrapping, BadThreshold) {
  EXPECT_THROW((void)detect_trapping({1.0}, 0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW((void)detect_trapping({1.0}, 1.0, 1.0, 1.0), DomainError);
}

TEST(DetectTrapping, MonotoneInThreshold) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(12);
    double sum = 0.0;
    for (auto& x : p) sum += (x = std::pow(u(rng), 4));
    for (auto& x : p) x /= sum;
    // Angles at sqrt(n+1) = 1, 2, 3 land on multiples of pi.
    const double T = 2.0 * std::numbers::pi;
    std::optional<int> previous;
    for (double th : {0.001, 0.01, 0.05, 0.1, 0.3, 0.6, 0.9}) {
      const auto n = detect_trapping(p, th, 1.0, T);
      if (previous) {
        ASSERT_TRUE(n);
        EXPECT_LE(*n, *previous);
      }
      if (n) previous = n;
    }
  }
}

TEST(DetectTrapping, VacuumFixedPoint) {
  const SystemParams params{1.0, 1e-4, 2.0 * std::numbers::pi, 10};
  const auto fp = fixed_point(Liouvillian(params));
  ASSERT_TRUE(fp.converged);
  EXPECT_EQ(detect_trapping(photon_distribution(fp.state), 1e-2, params), 0);
}

TEST(TimeAverage, ConstantObservable) {
  const Liouvillian L({0.3, 0.7, 2.0, 6});
  const auto traj = simulate(L, new_pure(DotLevel::Ground, 0, 6), 6, 20);
  EXPECT_NEAR(time_average(traj, "trace", 0, 6), 1.0, 1e-12);
  const auto idle = simulate(Liouvillian({0.0, 0.0, 2.0, 3}), new_pure(DotLevel::Excited, 1, 3), 4, 10);
  EXPECT_EQ(time_average(idle, "p_D_pre", 1, 4), 1.0);
  EXPECT_EQ(time_average(idle, "mean_n", 0, 4), 1.0);
}

TEST(TimeAverage, MatchesTrapezoidByHand) {
  const Liouvillian L({0.3, 0.7, 2.0, 6});
  const auto traj = simulate(L, new_pure(DotLevel::Excited, 2, 6), 4, 8);
  double sum = 0.0;
  for (int i = 8; i < 24; ++i)
    sum += 0.5 * (traj.samples[i + 1].t - traj.samples[i].t) * (traj.samples[i].mean_n + traj.samples[i + 1].mean_n);
  EXPECT_NEAR(time_average(traj, "mean_n", 1, 3), sum / (traj.samples[24].t - traj.samples[8].t), 1e-15);
  EXPECT_NO_THROW((void)time_average(traj, "p_2", 0, 4));
}

TEST(TimeAverage, Errors) {
  const Liouvillian L({0.3, 0.7, 2.0, 3});
  const auto traj = simulate(L, new_pure(DotLevel::Ground, 0, 3), 4, 5);
  EXPECT_THROW((void)time_average(traj, "mean_n", 2, 2), DomainError);
  EXPECT_THROW((void)time_average(traj, "mean_n", 0, 5), DomainError);
  EXPECT_THROW((void)time_average(traj, "photons", 0, 2), DomainError);
  EXPECT_THROW((void)time_average(traj, "p_9", 0, 2), DomainError);
}
