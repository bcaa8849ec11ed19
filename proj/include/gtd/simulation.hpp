#pragma once

// Seeded stochastic validation: sample populations, run every procedure on
// realized defect vectors while auditing for inferable tests, and reproduce
// the random-prevalence comparison experiment.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "gtd/model.hpp"
#include "gtd/partition.hpp"
#include "gtd/policy.hpp"

namespace gtd {

/// Seedable stream backed by std::mt19937_64. Doubles are built from the top
/// 53 bits of each draw, so sequences are identical on every platform.
///
/// Substream r of seed s is seeded with splitmix64(s + (r + 1) * golden),
/// one substream per replicate.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  static RngStream substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent Bernoulli(p_i) draws; 1 marks a defective item.
std::vector<std::uint8_t> sample_population(const PrevalenceSpec& spec, RngStream& rng);

/// n independent Beta(1, (1 - p_mean) / p_mean) draws by inverse CDF.
PrevalenceSpec sample_prevalence_beta(double p_mean, std::size_t n, RngStream& rng);

/// D, D' or S run over pools cut in order from items 0..N-1.
struct PoolingPlan {
  Procedure procedure = Procedure::Dorfman;
  Partition partition;
};

struct TestRecord {
  std::size_t begin = 0;  // pooled items [begin, end)
  std::size_t end = 0;
  bool positive = false;
  /// Outcome was already implied by earlier results.
  bool implied = false;
};

struct ExecutionTrace {
  std::size_t tests_performed = 0;
  std::vector<TestRecord> tests;
  std::vector<std::uint8_t> classification;
  bool classification_ok = false;
  bool audited = false;
  bool audit_ok = true;
  std::size_t implied_tests = 0;
};

struct ExecuteOptions {
  bool audit = false;
  bool record_tests = false;
};

ExecutionTrace execute(const PoolingPlan& plan, std::span<const std::uint8_t> defects,
                       ExecuteOptions options = {});
ExecutionTrace execute(const DecisionPolicy& policy, std::span<const std::uint8_t> defects,
                       ExecuteOptions options = {});

struct SimulationReport {
  std::string procedure;
  std::size_t replicates = 0;
  double mean_tests = 0.0;
  /// Absent for a single replicate.
  std::optional<double> standard_error;
  double analytic_expectation = 0.0;
  std::uint64_t seed = 0;
  bool audited = false;
  /// Replicates containing at least one inferable test.
  std::size_t audit_failures = 0;
  std::size_t implied_tests = 0;
  std::size_t classification_errors = 0;

  /// |mean - analytic| / SE; absent without an SE or when SE is zero.
  std::optional<double> z_score() const;
};

/// A design the simulator can execute: a pooling partition evaluated on the
/// given (ordered) probabilities, or an adaptive policy.
struct PoolingDesign {
  PoolingPlan plan;
  PrevalenceSpec spec;
  double analytic_expectation;
};

PoolingDesign pooling_design(const PartitionDesign& design);

using SimulationDesign = std::variant<PoolingDesign, DecisionPolicy>;

SimulationReport monte_carlo(const SimulationDesign& design, std::size_t replicates,
                             std::uint64_t seed, bool audit = false);

struct Table2Row {
  double p = 0.0;
  double dorfman = 0.0;
  double dorfman_prime = 0.0;
  double sterrett = 0.0;
  double hierarchical = 0.0;
  double nested = 0.0;
  double entropy = 0.0;
  std::size_t draws = 0;
};

/// Averages of the optimal costs over the given specs; each is sorted
/// ascending before the ordered-partition and policy DPs run.
Table2Row average_optimal_costs(double p_label, std::span<const PrevalenceSpec> specs);

/// M Beta-drawn heterogeneous populations of size n; draw m uses substream m.
Table2Row table2_experiment(double p_mean, std::size_t n, std::size_t draws, std::uint64_t seed);

}  // namespace gtd
