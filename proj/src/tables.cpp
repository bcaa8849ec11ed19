#include "gtd/tables.hpp"

#include "gtd/bounds.hpp"
#include "gtd/dp.hpp"
#include "gtd/partition.hpp"

namespace gtd {

std::vector<double> table1_grid() { return {0.001, 0.01, 0.05, 0.10, 0.20, 0.25, 0.30, 0.35, 0.38}; }

std::vector<double> table2_grid() { return {0.001, 0.01, 0.05, 0.10, 0.20, 0.30}; }

Table1Row table1_row(double p, std::size_t n) {
  const PrevalenceSpec spec = PrevalenceSpec::homogeneous(p, n);
  Table1Row row;
  row.p = p;
  row.n = n;
  row.dorfman_prime = optimal_partition_homogeneous(Procedure::DorfmanPrime, p, n).cost.expected_tests;
  row.sterrett = optimal_partition_homogeneous(Procedure::Sterrett, p, n).cost.expected_tests;
  row.hierarchical = solve_hier(spec).cost.expected_tests;
  row.nested = solve_nested(spec).cost.expected_tests;
  row.entropy = shannon_entropy(spec);
  return row;
}

std::vector<Table1Row> table1(std::size_t n) {
  std::vector<Table1Row> rows;
  for (double p : table1_grid()) rows.push_back(table1_row(p, n));
  return rows;
}

}  // namespace gtd
