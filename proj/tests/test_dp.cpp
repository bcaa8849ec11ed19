#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "gtd/bounds.hpp"
#include "gtd/closed_form.hpp"
#include "gtd/dp.hpp"
#include "gtd/simulation.hpp"
#include "gtd/tables.hpp"
#include "oracles.hpp"

using gtd::PolicyClass;
using gtd::PrevalenceSpec;

namespace {

struct PrintedRow {
  double p, dorfman_prime, sterrett, hierarchical, nested, entropy;
  bool four_decimal_hier;
};

// Reference expected tests per 100 items.
const PrintedRow kTable1[] = {
    {0.001, 6.278, 4.605, 1.9554, 1.766, 1.141, true},
    {0.01, 19.470, 15.181, 9.6872, 8.320, 8.079, true},
    {0.05, 41.807, 36.018, 32.0186, 28.958, 28.640, true},
    {0.10, 57.567, 52.288, 50.6752, 47.375, 46.900, true},
    {0.20, 77.872, 74.974, 74.974, 72.875, 72.192, false},
    {0.25, 84.375, 83.875, 83.875, 82.191, 81.128, false},
    {0.30, 90.500, 90.500, 90.500, 88.889, 88.129, false},
    {0.35, 96.375, 96.375, 96.375, 95.633, 93.407, false},
    {0.38, 99.780, 99.780, 99.780, 99.730, 95.804, false},
};

}  // namespace

TEST(Table1, ReproducesPrintedValues) {
  for (const auto& row : kTable1) {
    const auto r = gtd::table1_row(row.p, 100);
    EXPECT_NEAR(r.dorfman_prime, row.dorfman_prime, 1e-3) << row.p;
    EXPECT_NEAR(r.sterrett, row.sterrett, 1e-3) << row.p;
    EXPECT_NEAR(r.hierarchical, row.hierarchical, row.four_decimal_hier ? 5e-4 : 1e-3) << row.p;
    EXPECT_NEAR(r.nested, row.nested, 1e-3) << row.p;
    EXPECT_NEAR(r.entropy, row.entropy, 1e-3) << row.p;
  }
}

TEST(Nested, SingleItemCostsOne) {
  for (double p : {0.01, 0.3, 0.9}) {
    const auto homo = gtd::solve_nested(PrevalenceSpec::homogeneous(p, 1));
    EXPECT_DOUBLE_EQ(homo.cost.expected_tests, 1.0);
    const auto hetero = gtd::solve_nested(PrevalenceSpec::heterogeneous({p}));
    EXPECT_DOUBLE_EQ(hetero.cost.expected_tests, 1.0);
    EXPECT_DOUBLE_EQ(gtd::solve_hier(PrevalenceSpec::homogeneous(p, 1)).cost.expected_tests, 1.0);
  }
}

TEST(Nested, PairCoincidence) {
  for (int i = 0; i < 50; ++i) {
    const double p = 0.001 + (0.379 - 0.001) * i / 49.0;
    const auto spec = PrevalenceSpec::homogeneous(p, 2);
    const double f = gtd::solve_nested(spec).cost.expected_tests;
    const double h = gtd::solve_hier(spec).cost.expected_tests;
    const double pair = 2 * gtd::cost_dorfman_prime(2, p);
    EXPECT_NEAR(f, pair, 1e-9);
    EXPECT_NEAR(h, pair, 1e-9);
    EXPECT_NEAR(gtd::huffman_bound(spec), pair, 1e-9);
  }
}

TEST(Nested, PairAboveUngarIsIndividual) {
  EXPECT_NEAR(gtd::solve_nested(PrevalenceSpec::homogeneous(0.5, 2)).cost.expected_tests, 2.0, 1e-12);
}

TEST(Oracle, ExhaustiveTreesSmallN) {
  for (double p : {0.05, 0.2, 0.35})
    for (std::size_t n = 2; n <= 4; ++n) {
      oracle::TreeSearch search(std::vector<double>(n, p));
      const auto spec = PrevalenceSpec::homogeneous(p, n);
      EXPECT_NEAR(gtd::solve_nested(spec).cost.expected_tests, search.nested(), 1e-9) << p << ' ' << n;
      EXPECT_NEAR(gtd::solve_hier(spec).cost.expected_tests, search.hierarchical(), 1e-9) << p << ' ' << n;
    }
}

TEST(Oracle, FrozenTreeValues) {
  EXPECT_NEAR(oracle::TreeSearch({0.05, 0.05, 0.05, 0.05}).nested(), 1.537625, 1e-12);
  EXPECT_NEAR(oracle::TreeSearch({0.05, 0.05, 0.05, 0.05}).hierarchical(), 1.57561875, 1e-12);
  EXPECT_NEAR(oracle::TreeSearch({0.35, 0.35, 0.35}).hierarchical(), 2.9275, 1e-12);
}

TEST(Oracle, HeterogeneousSmallN) {
  // Each ordering is an upper bound on the best tree over any order; the
  // nested class also covers every hierarchical tree.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> probs(2 + trial % 3);
    for (auto& p : probs) p = u(rng);
    oracle::TreeSearch search(probs);
    const auto spec = PrevalenceSpec::heterogeneous(probs);
    const double nested = gtd::solve_nested(spec).cost.expected_tests;
    const double hier = gtd::solve_hier(spec).cost.expected_tests;
    EXPECT_GE(nested, search.nested() - 1e-9);
    EXPECT_GE(hier, search.hierarchical() - 1e-9);
    EXPECT_LE(search.nested(), search.hierarchical() + 1e-12);
  }
}

TEST(Heterogeneous, DegenerateMatchesHomogeneous) {
  for (double p : {0.01, 0.1, 0.3}) {
    const auto homo = PrevalenceSpec::homogeneous(p, 40);
    const auto hetero = PrevalenceSpec::heterogeneous(std::vector<double>(40, p));
    EXPECT_NEAR(gtd::solve_nested(hetero).cost.expected_tests, gtd::solve_nested(homo).cost.expected_tests,
                1e-9);
    EXPECT_NEAR(gtd::solve_hier(hetero).cost.expected_tests, gtd::solve_hier(homo).cost.expected_tests, 1e-9);
  }
}

TEST(Dominance, NestedBelowHierarchicalBelowSterrett) {
  for (double p : gtd::table1_grid()) {
    const auto r = gtd::table1_row(p, 100);
    EXPECT_LE(r.nested, r.hierarchical + 1e-9);
    EXPECT_LE(r.hierarchical, r.sterrett + 1e-9);
    EXPECT_LE(r.hierarchical, r.dorfman_prime + 1e-9);
    EXPECT_LE(r.entropy, r.nested + 1e-9);
  }
}

TEST(Dominance, SandwichSmallN) {
  for (double p : {0.01, 0.05, 0.1, 0.3})
    for (std::size_t n = 2; n <= 10; ++n) {
      const auto spec = PrevalenceSpec::homogeneous(p, n);
      const double h = gtd::shannon_entropy(spec);
      const double l = gtd::huffman_bound(spec);
      EXPECT_LE(h, l + 1e-9);
      EXPECT_LE(l, h + 1 + 1e-9);
      EXPECT_LE(l, gtd::solve_nested(spec).cost.expected_tests + 1e-9);
    }
}

TEST(Ungar, IndividualTestingAboveThreshold) {
  EXPECT_EQ(gtd::solve_nested(PrevalenceSpec::homogeneous(0.39, 100)).cost.expected_tests, 100.0);
  EXPECT_LT(gtd::solve_nested(PrevalenceSpec::homogeneous(0.38, 100)).cost.expected_tests, 100.0);
}

TEST(Tables, ValuesAreConditional) {
  const auto sol = gtd::solve_nested(PrevalenceSpec::homogeneous(0.1, 12));
  const auto& t = sol.tables;
  EXPECT_DOUBLE_EQ(t.F(0), 0.0);
  EXPECT_DOUBLE_EQ(t.F(1), 1.0);
  EXPECT_NEAR(t.F(12), sol.cost.expected_tests, 1e-12);
  // A defective singleton is already classified.
  EXPECT_NEAR(t.G(1, 5), t.F(5), 1e-12);
  const auto hier = gtd::solve_hier(PrevalenceSpec::homogeneous(0.1, 12));
  EXPECT_NEAR(hier.tables.h1(0, 12), hier.cost.expected_tests, 1e-12);
}

TEST(Policy, ExecutionClassifiesEveryPopulation) {
  gtd::RngStream rng(123);
  const std::vector<PrevalenceSpec> specs = {
      PrevalenceSpec::homogeneous(0.08, 30),
      PrevalenceSpec::heterogeneous({0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.02, 0.04}),
  };
  for (const auto& spec : specs) {
    for (const auto& policy : {gtd::solve_nested(spec).policy, gtd::solve_hier(spec).policy}) {
      for (int rep = 0; rep < 300; ++rep) {
        const auto defects = gtd::sample_population(spec, rng);
        const auto trace = gtd::execute(policy, defects, {true, false});
        EXPECT_TRUE(trace.classification_ok);
        EXPECT_TRUE(trace.audit_ok);
      }
    }
  }
}

TEST(Policy, ExhaustiveDefectPatternsGiveDpExpectation) {
  // Weighting each pattern's test count by its probability reproduces the
  // DP expectation, so the stored rules are the optimal ones.
  const std::vector<double> probs = {0.03, 0.1, 0.2, 0.07, 0.15, 0.05};
  const auto spec = PrevalenceSpec::heterogeneous(probs);
  for (const auto& policy : {gtd::solve_nested(spec).policy, gtd::solve_hier(spec).policy}) {
    double expected = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << probs.size()); ++mask) {
      std::vector<std::uint8_t> d(probs.size());
      for (std::size_t i = 0; i < probs.size(); ++i) d[i] = (mask >> i) & 1U;
      expected += oracle::config_prob(probs, mask) * static_cast<double>(gtd::execute(policy, d).tests_performed);
    }
    EXPECT_NEAR(expected, policy.expected_tests(), 1e-9);
  }
}

TEST(Policy, JsonRoundTrip) {
  for (const auto& spec : {PrevalenceSpec::homogeneous(0.05, 20),
                           PrevalenceSpec::heterogeneous({0.01, 0.2, 0.05, 0.3})}) {
    for (const auto& policy : {gtd::solve_nested(spec).policy, gtd::solve_hier(spec).policy}) {
      const auto copy = gtd::DecisionPolicy::from_json(policy.to_json());
      EXPECT_EQ(copy.policy_class(), policy.policy_class());
      EXPECT_EQ(copy.rules(), policy.rules());
      EXPECT_DOUBLE_EQ(copy.expected_tests(), policy.expected_tests());
      EXPECT_EQ(copy.spec().probs(), policy.spec().probs());
    }
  }
}

TEST(Policy, SaveAndLoad) {
  const auto path = (std::filesystem::temp_directory_path() / "gtd_policy_test.json").string();
  const auto policy = gtd::solve_hier(PrevalenceSpec::homogeneous(0.1, 15)).policy;
  policy.save(path);
  const auto loaded = gtd::DecisionPolicy::load(path);
  EXPECT_EQ(loaded.rules(), policy.rules());
  std::filesystem::remove(path);
  EXPECT_THROW(gtd::DecisionPolicy::load(path), gtd::PolicyError);
}

TEST(Policy, MalformedJsonRejected) {
  EXPECT_THROW(gtd::DecisionPolicy::from_json("{"), gtd::PolicyError);
  EXPECT_THROW(gtd::DecisionPolicy::from_json(R"({"class":"other","n":2})"), gtd::PolicyError);
  // Test size larger than the defective set.
  EXPECT_THROW(gtd::DecisionPolicy::from_json(
                   R"({"class":"nested","n":3,"expected_tests":2,"kind":"homogeneous","p":0.1,
                       "rules":[{"state":{"defective_size":2,"binomial_size":1},"test_size":2}]})"),
               gtd::PolicyError);
  // Heterogeneous rules must name their interval.
  EXPECT_THROW(gtd::DecisionPolicy::from_json(
                   R"({"class":"hier","n":2,"expected_tests":2,"kind":"heterogeneous","probs":[0.1,0.2],
                       "rules":[{"state":{"defective_size":0,"binomial_size":2},"test_size":1}]})"),
               gtd::PolicyError);
}

TEST(Policy, MissingRuleIsAnError) {
  gtd::DecisionPolicy policy(PolicyClass::Nested, PrevalenceSpec::homogeneous(0.1, 3), 3.0);
  EXPECT_THROW(policy.test_size(policy.key(0, 0, 3)), gtd::PolicyError);
  const std::vector<std::uint8_t> defects(3, 0);
  EXPECT_THROW(gtd::execute(policy, defects), gtd::PolicyError);
}

TEST(Limits, RejectsOversizedInput) {
  EXPECT_THROW(gtd::solve_nested(PrevalenceSpec::homogeneous(0.1, gtd::kMaxDpItems + 1)), gtd::InvalidArgument);
}
