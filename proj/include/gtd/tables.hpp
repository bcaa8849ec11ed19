#pragma once

#include <cstddef>
#include <vector>

namespace gtd {

/// Optimal expected tests for one homogeneous population.
struct Table1Row {
  double p = 0.0;
  std::size_t n = 0;
  double dorfman_prime = 0.0;
  double sterrett = 0.0;
  double hierarchical = 0.0;
  double nested = 0.0;
  double entropy = 0.0;
};

/// Prevalences of the homogeneous comparison table.
std::vector<double> table1_grid();
/// Prevalences of the random-prevalence comparison table.
std::vector<double> table2_grid();

Table1Row table1_row(double p, std::size_t n);
std::vector<Table1Row> table1(std::size_t n = 100);

}  // namespace gtd
