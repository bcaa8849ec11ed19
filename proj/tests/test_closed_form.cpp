#include <gtest/gtest.h>

#include <cmath>

#include "gtd/closed_form.hpp"
#include "oracles.hpp"

using gtd::Procedure;

TEST(Thresholds, Constants) {
  EXPECT_NEAR(gtd::ungar_threshold(), 0.3819660112501051, 1e-12);
  EXPECT_NEAR(gtd::samuels_individual_threshold(), 0.3066387256493652, 1e-12);
  EXPECT_NEAR(gtd::kUngarThreshold, gtd::ungar_threshold(), 1e-15);
  EXPECT_NEAR(gtd::kSamuelsIndividualThreshold, gtd::samuels_individual_threshold(), 1e-15);
}

TEST(CostDorfman, Values) {
  // 999,999 items in pools of 11 need about 195,571 tests.
  EXPECT_NEAR(gtd::cost_dorfman(11, 0.01), 0.1955708, 1e-6);
  EXPECT_EQ(std::lround(gtd::cost_dorfman(11, 0.01) * 999999), 195571);
  EXPECT_DOUBLE_EQ(gtd::cost_dorfman(1, 0.37), 1.0);
  EXPECT_DOUBLE_EQ(gtd::cost_dorfman(2, 0.5), 1.25);
  EXPECT_THROW(gtd::cost_dorfman(0, 0.1), gtd::InvalidArgument);
  EXPECT_THROW(gtd::cost_dorfman(2, 1.5), gtd::InvalidArgument);
}

TEST(CostDorfmanPrime, Values) {
  // Pair at p = 0.3: 1 test w.p. q^2, 2 w.p. pq, 3 w.p. p -> 1.81.
  EXPECT_NEAR(gtd::cost_dorfman_prime(2, 0.3), 0.905, 1e-15);
  EXPECT_DOUBLE_EQ(gtd::cost_dorfman_prime(1, 0.2), 1.0);
  EXPECT_NEAR(gtd::cost_dorfman_prime(2, 0.25) * 100, 84.375, 1e-12);
  EXPECT_THROW(gtd::cost_dorfman_prime(-3, 0.1), gtd::InvalidArgument);
}

TEST(CostSterrett, Values) {
  EXPECT_NEAR(gtd::cost_sterrett(1, 0.123), 1.0, 1e-15);
  EXPECT_NEAR(gtd::cost_sterrett(2, 0.5), 1.125, 1e-15);
  EXPECT_NEAR(gtd::cost_sterrett(3, 0.25), 0.8385416666666667, 1e-14);
  EXPECT_THROW(gtd::cost_sterrett(0, 0.2), gtd::InvalidArgument);
}

TEST(ClosedForms, MatchOutcomeEnumeration) {
  for (double p : {0.003, 0.05, 0.2, 0.37, 0.6}) {
    for (int k = 1; k <= 10; ++k) {
      const std::vector<double> pool(k, p);
      EXPECT_NEAR(k * gtd::cost_dorfman(k, p), oracle::pool_cost(oracle::Rule::Dorfman, pool), 1e-12);
      EXPECT_NEAR(k * gtd::cost_dorfman_prime(k, p), oracle::pool_cost(oracle::Rule::DorfmanPrime, pool),
                  1e-12);
      EXPECT_NEAR(k * gtd::cost_sterrett(k, p), oracle::pool_cost(oracle::Rule::Sterrett, pool), 1e-12);
    }
  }
}

TEST(ClosedForms, Dominance) {
  // The saving p q^(k-1) / k drops below double resolution for large p and k.
  for (double p = 0.001; p < 0.3; p += 0.01)
    for (int k = 2; k <= 60; ++k)
      EXPECT_LT(gtd::cost_dorfman_prime(k, p), gtd::cost_dorfman(k, p)) << k << ' ' << p;
  // S can lose to D' at a fixed large k, but not at the optimum.
  for (double p = 0.001; p < gtd::kUngarThreshold; p += 0.002)
    EXPECT_LE(gtd::optimal_size(Procedure::Sterrett, p).per_person,
              gtd::optimal_size(Procedure::DorfmanPrime, p).per_person + 1e-15)
        << p;
}

TEST(OptimalSize, DorfmanFlagship) {
  const auto r = gtd::optimal_size(Procedure::Dorfman, 0.01);
  EXPECT_EQ(r.k_star, 11);
  EXPECT_TRUE(r.in_window());
  EXPECT_EQ(r.k_max, 50);
}

TEST(OptimalSize, DorfmanIndividualAboveThreshold) {
  const auto r = gtd::optimal_size(Procedure::Dorfman, 0.35);
  EXPECT_EQ(r.k_star, 1);
  EXPECT_DOUBLE_EQ(r.per_person, 1.0);
  EXPECT_EQ(r.window, (std::vector<std::int64_t>{1}));
}

TEST(OptimalSize, SterrettScan) {
  // floor(sqrt(200)) = 14 gives the window {14, 15, 16}.
  const auto r = gtd::optimal_size(Procedure::Sterrett, 0.01);
  EXPECT_TRUE(r.in_window());
  EXPECT_EQ(r.window, (std::vector<std::int64_t>{14, 15, 16}));
  for (int k = 1; k <= 50; ++k) EXPECT_LE(r.per_person, gtd::cost_sterrett(k, 0.01));
}

TEST(OptimalSize, TiesGoToSmallerK) {
  // At the Samuels threshold E_D(3) equals individual testing exactly.
  const auto r = gtd::optimal_size(Procedure::Dorfman, gtd::samuels_individual_threshold() + 1e-12);
  EXPECT_EQ(r.k_star, 1);
}

TEST(OptimalSize, Errors) {
  EXPECT_THROW(gtd::optimal_size(Procedure::Dorfman, 0.1, 0), gtd::InvalidArgument);
  EXPECT_THROW(gtd::optimal_size(Procedure::Nested, 0.1), gtd::InvalidArgument);
  EXPECT_THROW(gtd::optimal_size(Procedure::Sterrett, 0.0), gtd::InvalidArgument);
}

TEST(OptimalSize, SamuelsMonotoneInP) {
  std::int64_t previous = 1 << 20;
  for (int i = 1; i <= 400; ++i) {
    const double p = 0.001 * i;
    const auto k = gtd::optimal_size(Procedure::Dorfman, p).k_star;
    EXPECT_LE(k, previous) << "p = " << p;
    previous = k;
  }
}

TEST(OptimalSize, RatioApproachesSqrtTwo) {
  // Reference ratios from a separate scan of k = 1..20000 in Python.
  auto ratio = [](double p) {
    return gtd::optimal_size(Procedure::Dorfman, p).per_person /
           gtd::optimal_size(Procedure::Sterrett, p).per_person;
  };
  EXPECT_NEAR(ratio(1e-3), 1.3689658137406122, 1e-9);
  EXPECT_NEAR(ratio(1e-4), 1.3993235797751589, 1e-9);
  EXPECT_NEAR(ratio(1e-5), 1.409436537584761, 1e-9);
  EXPECT_NEAR(ratio(1e-6), 1.4126965106386737, 1e-9);
  EXPECT_LT(ratio(1e-6), std::sqrt(2.0));
}
