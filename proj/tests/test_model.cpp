#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gtd/model.hpp"

using gtd::PrevalenceSpec;

TEST(Validate, AcceptsInRangeHomogeneous) {
  const auto spec = gtd::validate(PrevalenceSpec::homogeneous(0.01, 100));
  EXPECT_TRUE(spec.is_homogeneous());
  EXPECT_EQ(spec.size(), 100u);
  EXPECT_DOUBLE_EQ(spec.p(), 0.01);
}

TEST(Validate, RejectsBoundaryProbability) {
  try {
    PrevalenceSpec::homogeneous(0.0, 10);
    FAIL() << "p = 0 accepted";
  } catch (const gtd::InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("probability out of open interval"), std::string::npos);
  }
  EXPECT_THROW(PrevalenceSpec::homogeneous(1.0, 10), gtd::InvalidArgument);
  EXPECT_THROW(PrevalenceSpec::heterogeneous({0.2, 1.0}), gtd::InvalidArgument);
}

TEST(Validate, RejectsBadSizesAndNonFinite) {
  EXPECT_THROW(PrevalenceSpec::homogeneous(0.1, 0), gtd::InvalidArgument);
  EXPECT_THROW(PrevalenceSpec::heterogeneous({}), gtd::InvalidArgument);
  EXPECT_THROW(PrevalenceSpec::heterogeneous({0.1, std::nan("")}), gtd::InvalidArgument);
  EXPECT_THROW(PrevalenceSpec::homogeneous(std::numeric_limits<double>::infinity(), 3),
               gtd::InvalidArgument);
}

TEST(Validate, AcceptsHeterogeneousAndIsIdempotent) {
  const auto spec = PrevalenceSpec::heterogeneous({0.1, 0.5, 0.99});
  const auto once = gtd::validate(spec);
  const auto twice = gtd::validate(once);
  EXPECT_EQ(twice.probs(), spec.probs());
  EXPECT_FALSE(twice.is_homogeneous());
  EXPECT_THROW(spec.p(), gtd::InvalidArgument);
}

TEST(MissProduct, HomogeneousPower) {
  const auto spec = PrevalenceSpec::homogeneous(0.01, 100);
  // 0.99^11 by repeated multiplication
  EXPECT_NEAR(spec.miss_product(0, 11), 0.8953382542587163, 1e-15);
  EXPECT_DOUBLE_EQ(spec.miss_product(5, 5), 1.0);
}

TEST(MissProduct, HeterogeneousAndBounds) {
  const auto spec = PrevalenceSpec::heterogeneous({0.5, 0.5});
  EXPECT_DOUBLE_EQ(spec.miss_product(0, 2), 0.25);
  EXPECT_DOUBLE_EQ(spec.miss_product(1, 1), 1.0);
  EXPECT_THROW(spec.miss_product(1, 3), gtd::OutOfRange);
  EXPECT_THROW(spec.miss_product(2, 1), gtd::OutOfRange);
}

TEST(MissProduct, MultiplicativeOverAdjacentRanges) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-4, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> probs(1 + rng() % 60);
    for (auto& p : probs) p = u(rng);
    const auto spec = PrevalenceSpec::heterogeneous(probs);
    const std::size_t n = probs.size();
    const std::size_t a = rng() % (n + 1);
    const std::size_t c = a + rng() % (n - a + 1);
    const std::size_t b = a + (c > a ? rng() % (c - a + 1) : 0);
    const double whole = spec.miss_product(a, c);
    const double parts = spec.miss_product(a, b) * spec.miss_product(b, c);
    EXPECT_NEAR(parts, whole, 1e-12 * whole);
  }
}

TEST(MissProduct, SurvivesPrefixUnderflow) {
  // 1200 items at q = 0.5 drive the prefix product to subnormal values.
  std::vector<double> probs(1200, 0.5);
  probs.back() = 0.25;
  const auto spec = PrevalenceSpec::heterogeneous(probs);
  EXPECT_NEAR(spec.miss_product(1198, 1200), 0.5 * 0.75, 1e-15);
  EXPECT_NEAR(spec.miss_product(1100, 1110), std::ldexp(1.0, -10), 1e-18);
}

TEST(SortedAscending, ReportsPermutation) {
  const auto spec = PrevalenceSpec::heterogeneous({0.3, 0.1, 0.2});
  std::vector<std::size_t> order;
  const auto sorted = spec.sorted_ascending(&order);
  EXPECT_EQ(sorted.probs(), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(ProbsJson, ParsesAndRejects) {
  const auto spec = gtd::parse_probs_json(R"({"probs": [0.1, 0.2]})");
  EXPECT_EQ(spec.size(), 2u);
  EXPECT_THROW(gtd::parse_probs_json("{\"p\": 1}"), gtd::InvalidArgument);
  EXPECT_THROW(gtd::parse_probs_json("not json"), gtd::InvalidArgument);
  EXPECT_THROW(gtd::parse_probs_json(R"({"probs": [0.1, "x"]})"), gtd::InvalidArgument);
  EXPECT_THROW(gtd::load_probs_file("/nonexistent/probs.json"), gtd::InvalidArgument);
}

TEST(Partition, Check) {
  gtd::Partition part{{3, 4}};
  EXPECT_EQ(part.total(), 7u);
  EXPECT_NO_THROW(part.check(7));
  EXPECT_THROW(part.check(8), gtd::InvalidArgument);
  EXPECT_THROW((gtd::Partition{{0, 7}}).check(7), gtd::InvalidArgument);
}

TEST(CostReport, PerItem) {
  gtd::CostReport r{gtd::Procedure::Nested, 8.32, 100};
  EXPECT_NEAR(r.per_item() * 100, r.expected_tests, 1e-9 * r.expected_tests);
}

TEST(CompensatedSum, OrderInsensitive) {
  std::vector<double> xs;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) xs.push_back(u(rng) * (i % 7 == 0 ? 1e-9 : 1.0));
  gtd::CompensatedSum forward, backward;
  for (double x : xs) forward.add(x);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) backward.add(*it);
  EXPECT_NEAR(forward.value(), backward.value(), 1e-12 * std::max(1.0, std::abs(forward.value())));
}

TEST(Procedure, ParseRoundTrip) {
  for (auto proc : {gtd::Procedure::Dorfman, gtd::Procedure::DorfmanPrime, gtd::Procedure::Sterrett,
                    gtd::Procedure::Hierarchical, gtd::Procedure::Nested})
    EXPECT_EQ(gtd::parse_procedure(gtd::to_string(proc)), proc);
  EXPECT_THROW(gtd::parse_procedure("x"), gtd::InvalidArgument);
}
