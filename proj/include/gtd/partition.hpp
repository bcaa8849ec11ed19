#pragma once

// Optimal splitting of a finite population into pools for D, D' and S.

#include <cstddef>
#include <vector>

#include "gtd/model.hpp"

namespace gtd {

/// Expected tests for one pool of k exchangeable items with prevalence p.
double group_cost_homogeneous(Procedure proc, std::size_t k, double p);

/// Expected tests for the pool of items [begin, end) of `spec`, tested in
/// that order (the order matters for D' and S).
double group_cost(Procedure proc, const PrevalenceSpec& spec, std::size_t begin, std::size_t end);

/// Cost of every pool [begin, end) for begin in [0, end), in one O(end)
/// sweep. Entry `begin` of the result holds the cost of [begin, end).
std::vector<double> group_costs_ending_at(Procedure proc, const PrevalenceSpec& spec,
                                          std::size_t end);

struct PartitionDesign {
  CostReport cost;
  Partition partition;
  /// Expected tests of each pool, aligned with partition.groups.
  std::vector<double> group_costs;
  /// Item order the pools were cut from: position -> original item index.
  std::vector<std::size_t> item_order;
  /// Probabilities in item_order, as the design was evaluated.
  std::vector<double> ordered_probs;
  bool presorted = false;
  /// False when the result is optimal only among contiguous (ordered)
  /// partitions of item_order rather than over all set partitions.
  bool globally_optimal = true;
};

/// f(0) = 0, f(n) = min_k [group_cost(k) + f(n - k)]; ties favour the smaller
/// leading pool.
PartitionDesign optimal_partition_homogeneous(Procedure proc, double p, std::size_t n);

/// Interval DP over a fixed item order. For D the ordered optimum over the
/// ascending order is optimal over all partitions; for D' and S the result is
/// flagged as ordered-only. Homogeneous specs are rejected.
PartitionDesign optimal_ordered_partition(Procedure proc, const PrevalenceSpec& spec,
                                          bool presort = true);

/// Evaluates a given partition (pools cut in item order).
double partition_cost(Procedure proc, const PrevalenceSpec& spec, const Partition& partition);

}  // namespace gtd
