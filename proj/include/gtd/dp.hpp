#pragma once

// Optimal hierarchical (R3) and nested (R1) procedures by dynamic programming.
//
// Homogeneous specs are solved over set sizes. Heterogeneous specs are solved
// over contiguous blocks of the given item order, always pooling a prefix of
// the current block; callers that want the ascending order sort first.

#include <cstddef>
#include <vector>

#include "gtd/model.hpp"
#include "gtd/policy.hpp"

namespace gtd {

/// Value functions of the hierarchical DP.
///
/// h1 is the expected cost of resolving untested items sharing one history;
/// h2 the cost of resolving a defective set. Homogeneous tables are indexed
/// by set size; heterogeneous ones by block [begin, end).
class HierValueTables {
 public:
  HierValueTables(std::size_t n, bool homogeneous);

  std::size_t size() const { return n_; }
  bool homogeneous() const { return homogeneous_; }

  double h1(std::size_t begin, std::size_t end) const { return h1_[index(begin, end)]; }
  double h2(std::size_t begin, std::size_t end) const { return h2_[index(begin, end)]; }
  std::size_t choice1(std::size_t begin, std::size_t end) const { return choice1_[index(begin, end)]; }
  std::size_t choice2(std::size_t begin, std::size_t end) const { return choice2_[index(begin, end)]; }

 private:
  friend struct HierSolver;
  std::size_t index(std::size_t begin, std::size_t end) const {
    return homogeneous_ ? end - begin : begin * (n_ + 1) + end;
  }

  std::size_t n_;
  bool homogeneous_;
  std::vector<double> h1_, h2_;
  std::vector<std::size_t> choice1_, choice2_;
};

struct HierSolution {
  CostReport cost;
  HierValueTables tables;
  DecisionPolicy policy;
};

HierSolution solve_hier(const PrevalenceSpec& spec);

/// Value functions of the nested DP.
///
/// F is the cost with only a binomial set left; G with a defective set of m
/// items followed by the binomial set. Homogeneous: F(n), G(m, n).
/// Heterogeneous: the unresolved items are the suffix [start, N), so F(start)
/// and G(start, m).
class NestedValueTables {
 public:
  NestedValueTables(std::size_t n, bool homogeneous);

  std::size_t size() const { return n_; }
  bool homogeneous() const { return homogeneous_; }

  double F(std::size_t i) const { return f_[i]; }
  double G(std::size_t a, std::size_t b) const { return g_[a * (n_ + 1) + b]; }
  std::size_t f_choice(std::size_t i) const { return f_choice_[i]; }
  std::size_t g_choice(std::size_t a, std::size_t b) const { return g_choice_[a * (n_ + 1) + b]; }

 private:
  friend struct NestedSolver;

  std::size_t n_;
  bool homogeneous_;
  std::vector<double> f_, g_;
  std::vector<std::size_t> f_choice_, g_choice_;
};

struct NestedSolution {
  CostReport cost;
  NestedValueTables tables;
  DecisionPolicy policy;
};

NestedSolution solve_nested(const PrevalenceSpec& spec);

/// Convenience: expected tests of the optimal policy of either class.
double optimal_policy_cost(PolicyClass cls, const PrevalenceSpec& spec);

}  // namespace gtd
