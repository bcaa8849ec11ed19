#include "gtd/partition.hpp"

#include <limits>
#include <numeric>

#include "gtd/closed_form.hpp"

namespace gtd {

namespace {

void require_partition_procedure(Procedure proc) {
  if (!is_partition_procedure(proc))
    throw InvalidArgument("pool costs exist only for d, dp and s");
}

PartitionDesign rebuild(Procedure proc, const std::vector<std::size_t>& cut_before,
                        const std::vector<double>& value, std::size_t n,
                        const std::vector<double>& ordered_probs) {
  // cut_before[i] = start of the last pool of the optimal prefix [0, i).
  PartitionDesign design;
  std::vector<std::size_t> sizes;
  for (std::size_t i = n; i > 0; i = cut_before[i]) sizes.push_back(i - cut_before[i]);
  design.partition.groups.assign(sizes.rbegin(), sizes.rend());
  design.cost = CostReport{proc, value[n], n};
  design.ordered_probs = ordered_probs;
  design.item_order.resize(n);
  std::iota(design.item_order.begin(), design.item_order.end(), std::size_t{0});
  return design;
}

}  // namespace

double group_cost_homogeneous(Procedure proc, std::size_t k, double p) {
  require_partition_procedure(proc);
  if (k < 1) throw InvalidArgument("pool must contain at least one item");
  if (k == 1) return 1.0;
  return static_cast<double>(k) * per_person_cost(proc, static_cast<std::int64_t>(k), p);
}

std::vector<double> group_costs_ending_at(Procedure proc, const PrevalenceSpec& spec,
                                          std::size_t end) {
  require_partition_procedure(proc);
  if (end > spec.size()) throw OutOfRange("pool end beyond population");
  std::vector<double> costs(end);
  if (end == 0) return costs;

  if (proc == Procedure::Sterrett) {
    // U(i..j) = (1 - Q_ij) * C(i..j), the unconditional cost after a positive
    // pool. Expanding C gives U(i..j) = 1 - Q_ij + p_i + U(i+1..j), U(j..j) = 0,
    // and the pool cost is T(i..j) = 1 + U(i..j).
    double tail = 0.0;
    costs[end - 1] = 1.0;
    for (std::size_t i = end - 1; i-- > 0;) {
      tail += 1.0 - spec.miss_product(i, end) + spec.prob(i);
      costs[i] = 1.0 + tail;
    }
    return costs;
  }

  const double p_last = spec.prob(end - 1);
  for (std::size_t i = 0; i < end; ++i) {
    const std::size_t k = end - i;
    if (k == 1) {
      costs[i] = 1.0;
      continue;
    }
    const double positive = 1.0 - spec.miss_product(i, end);
    double c = 1.0 + static_cast<double>(k) * positive;
    if (proc == Procedure::DorfmanPrime) c -= spec.miss_product(i, end - 1) * p_last;
    costs[i] = c;
  }
  return costs;
}

double group_cost(Procedure proc, const PrevalenceSpec& spec, std::size_t begin, std::size_t end) {
  if (begin >= end) throw InvalidArgument("pool interval is empty");
  if (end > spec.size()) throw OutOfRange("pool end beyond population");
  if (spec.is_homogeneous()) return group_cost_homogeneous(proc, end - begin, spec.p());
  if (proc != Procedure::Sterrett) return group_costs_ending_at(proc, spec, end)[begin];

  // Sterrett needs only the suffix sweep from `begin`.
  double tail = 0.0;
  for (std::size_t i = end - 1; i-- > begin;) tail += 1.0 - spec.miss_product(i, end) + spec.prob(i);
  return 1.0 + tail;
}

PartitionDesign optimal_partition_homogeneous(Procedure proc, double p, std::size_t n) {
  const PrevalenceSpec spec = PrevalenceSpec::homogeneous(p, n);
  require_partition_procedure(proc);

  std::vector<double> pool(n + 1);
  for (std::size_t k = 1; k <= n; ++k) pool[k] = group_cost_homogeneous(proc, k, p);

  std::vector<double> f(n + 1, 0.0);
  std::vector<std::size_t> lead(n + 1, 0);
  for (std::size_t m = 1; m <= n; ++m) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= m; ++k) {
      const double v = pool[k] + f[m - k];
      if (v < best) {
        best = v;
        lead[m] = k;
      }
    }
    f[m] = best;
  }

  PartitionDesign design;
  for (std::size_t m = n; m > 0; m -= lead[m]) {
    design.partition.groups.push_back(lead[m]);
    design.group_costs.push_back(pool[lead[m]]);
  }
  design.cost = CostReport{proc, f[n], n};
  design.item_order.resize(n);
  std::iota(design.item_order.begin(), design.item_order.end(), std::size_t{0});
  design.ordered_probs = spec.probs();
  return design;
}

PartitionDesign optimal_ordered_partition(Procedure proc, const PrevalenceSpec& input, bool presort) {
  require_partition_procedure(proc);
  if (input.is_homogeneous())
    throw InvalidArgument("ordered partition needs a heterogeneous spec; use the homogeneous solver");

  std::vector<std::size_t> order;
  const PrevalenceSpec spec = presort ? input.sorted_ascending(&order) : input;
  const std::size_t n = spec.size();

  std::vector<double> f(n + 1, 0.0);
  std::vector<std::size_t> cut(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::vector<double> pools = group_costs_ending_at(proc, spec, i);
    double best = std::numeric_limits<double>::infinity();
    // Scan from the shortest final pool so ties keep the smaller one.
    for (std::size_t j = i; j-- > 0;) {
      const double v = f[j] + pools[j];
      if (v < best) {
        best = v;
        cut[i] = j;
      }
    }
    f[i] = best;
  }

  PartitionDesign design = rebuild(proc, cut, f, n, spec.probs());
  std::size_t start = 0;
  for (std::size_t g : design.partition.groups) {
    design.group_costs.push_back(group_cost(proc, spec, start, start + g));
    start += g;
  }
  if (presort) design.item_order = order;
  design.presorted = presort;
  design.globally_optimal = proc == Procedure::Dorfman && presort;
  return design;
}

double partition_cost(Procedure proc, const PrevalenceSpec& spec, const Partition& partition) {
  partition.check(spec.size());
  CompensatedSum total;
  std::size_t start = 0;
  for (std::size_t g : partition.groups) {
    total.add(group_cost(proc, spec, start, start + g));
    start += g;
  }
  return total.value();
}

}  // namespace gtd
