#pragma once

// Shared domain types for the group-testing design library.
//
// Item indices are zero-based and ranges are half-open [begin, end) in the
// item order held by the PrevalenceSpec.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtd {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class Procedure {
  Dorfman,       // D: two-stage pooling, every member of a positive pool retested
  DorfmanPrime,  // D': as D, but the inferable last member is never tested
  Sterrett,      // S: one-by-one retesting until the first positive, then recurse
  Hierarchical,  // R3: optimal hierarchical-class policy
  Nested,        // R1: optimal nested-class policy
};

std::string_view to_string(Procedure proc);

/// Parses the short CLI names: d, dp, s, hier, nested.
Procedure parse_procedure(std::string_view name);

/// True for the three pooling procedures driven by a partition.
constexpr bool is_partition_procedure(Procedure proc) {
  return proc == Procedure::Dorfman || proc == Procedure::DorfmanPrime ||
         proc == Procedure::Sterrett;
}

/// Population model: every item independently defective with probability p
/// (homogeneous) or p_i (heterogeneous, order significant).
///
/// Immutable once built. Heterogeneous specs carry cached prefix products of
/// q_i = 1 - p_i so interval miss products cost O(1).
class PrevalenceSpec {
 public:
  enum class Kind { Homogeneous, Heterogeneous };

  static PrevalenceSpec homogeneous(double p, std::size_t n);
  static PrevalenceSpec heterogeneous(std::vector<double> probs);

  Kind kind() const { return kind_; }
  bool is_homogeneous() const { return kind_ == Kind::Homogeneous; }
  std::size_t size() const { return n_; }

  /// Common defect probability. Throws for heterogeneous specs.
  double p() const;
  /// Defect probability of item i.
  double prob(std::size_t i) const;
  /// Per-item probabilities; materialized for homogeneous specs.
  std::vector<double> probs() const;

  /// Product of (1 - p_i) over [begin, end); 1 for an empty range.
  double miss_product(std::size_t begin, std::size_t end) const;

  /// Heterogeneous copy with items sorted by ascending probability. The
  /// permutation (new position -> original index) is written to `order`
  /// when given.
  PrevalenceSpec sorted_ascending(std::vector<std::size_t>* order = nullptr) const;

 private:
  PrevalenceSpec() = default;

  Kind kind_ = Kind::Homogeneous;
  std::size_t n_ = 0;
  double p_ = 0.0;
  std::shared_ptr<const std::vector<double>> probs_;
  // prefix_[i] = prod_{j<i} q_j
  std::shared_ptr<const std::vector<double>> prefix_;
};

/// Re-checks every invariant of `spec` and returns it unchanged.
PrevalenceSpec validate(const PrevalenceSpec& spec);

/// Loads {"probs": [...]} from a JSON file.
PrevalenceSpec load_probs_file(const std::string& path);

/// Parses {"probs": [...]} from JSON text.
PrevalenceSpec parse_probs_json(std::string_view text);

/// Ordered group sizes summing to the population size.
struct Partition {
  std::vector<std::size_t> groups;

  std::size_t total() const;
  /// Throws unless every size is positive and the sizes sum to n.
  void check(std::size_t n) const;
};

struct CostReport {
  Procedure procedure = Procedure::Dorfman;
  double expected_tests = 0.0;
  std::size_t population = 0;

  double per_item() const {
    return population == 0 ? 0.0 : expected_tests / static_cast<double>(population);
  }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace gtd
