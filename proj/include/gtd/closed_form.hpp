#pragma once

// Per-person expected test counts for D, D' and S in an unbounded population
// split into groups of equal size k, and the optimal-size search.

#include <cstdint>
#include <optional>
#include <vector>

#include "gtd/model.hpp"

namespace gtd {

/// Above this prevalence individual testing is optimal: (3 - sqrt 5) / 2.
inline constexpr double kUngarThreshold = 0.38196601125010515;
/// Above this prevalence k*_D = 1: 1 - 3^(-1/3).
inline constexpr double kSamuelsIndividualThreshold = 0.3066387256493653;

double ungar_threshold();
double samuels_individual_threshold();

double cost_dorfman(std::int64_t k, double p);
double cost_dorfman_prime(std::int64_t k, double p);
double cost_sterrett(std::int64_t k, double p);

/// Dispatches to one of the three closed forms above.
double per_person_cost(Procedure proc, std::int64_t k, double p);

struct SizeSearchResult {
  Procedure procedure = Procedure::Dorfman;
  std::int64_t k_star = 1;
  double per_person = 1.0;
  std::int64_t k_max = 1;
  /// Candidate optima predicted by the known characterization (D) or the
  /// empirical conjectures (D', S).
  std::vector<std::int64_t> window;

  bool in_window() const;
};

std::int64_t default_k_max(double p);

std::vector<std::int64_t> predicted_window(Procedure proc, double p);

/// Exhaustive argmin over k in [1, k_max]; ties go to the smaller k.
SizeSearchResult optimal_size(Procedure proc, double p,
                              std::optional<std::int64_t> k_max = std::nullopt);

}  // namespace gtd
