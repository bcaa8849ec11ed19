#pragma once

// Executable adaptive policies produced by the hierarchical and nested DPs.
//
// A state names the unresolved items as a contiguous block of the item order
// starting at `start`: the first `defective` items form the defective set
// (known to hold at least one defective), the next `binomial` items carry only
// the prior. The rule gives how many items from the front of the block to pool
// next: from the defective set when it is non-empty, otherwise from the
// binomial set. Homogeneous policies ignore `start` (it is stored as 0).
//
// Hierarchical policies use {start, m, 0} for a defective set of m items and
// {start, 0, n} for n untested items sharing one history.

#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gtd/model.hpp"

namespace gtd {

class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PolicyClass { Hierarchical, Nested };

std::string_view to_string(PolicyClass cls);
PolicyClass parse_policy_class(std::string_view name);

struct PolicyState {
  std::size_t start = 0;
  std::size_t defective = 0;
  std::size_t binomial = 0;

  auto operator<=>(const PolicyState&) const = default;
};

class DecisionPolicy {
 public:
  DecisionPolicy(PolicyClass cls, PrevalenceSpec spec, double expected_tests);

  PolicyClass policy_class() const { return class_; }
  const PrevalenceSpec& spec() const { return spec_; }
  double expected_tests() const { return expected_tests_; }
  const std::map<PolicyState, std::size_t>& rules() const { return rules_; }

  /// Normalizes `start` for homogeneous specs.
  PolicyState key(std::size_t start, std::size_t defective, std::size_t binomial) const;

  void set_rule(const PolicyState& state, std::size_t test_size);
  /// Throws PolicyError when the state has no rule.
  std::size_t test_size(const PolicyState& state) const;

  std::string to_json() const;
  static DecisionPolicy from_json(std::string_view text);

  void save(const std::string& path) const;
  static DecisionPolicy load(const std::string& path);

 private:
  PolicyClass class_;
  PrevalenceSpec spec_;
  double expected_tests_;
  std::map<PolicyState, std::size_t> rules_;
};

/// Largest population the O(N^2)-memory DP tables accept.
inline constexpr std::size_t kMaxDpItems = 2000;

}  // namespace gtd
