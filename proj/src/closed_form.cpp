#include "gtd/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gtd {

namespace {

void check_inputs(std::int64_t k, double p) {
  if (k < 1) throw InvalidArgument("group size must be at least 1");
  if (!std::isfinite(p) || !(p > 0.0 && p < 1.0))
    throw InvalidArgument("probability out of open interval (0,1)");
}

double pow_int(double base, std::int64_t e) { return std::pow(base, static_cast<double>(e)); }

}  // namespace

double ungar_threshold() { return (3.0 - std::sqrt(5.0)) / 2.0; }

double samuels_individual_threshold() { return 1.0 - std::cbrt(1.0 / 3.0); }

double cost_dorfman(std::int64_t k, double p) {
  check_inputs(k, p);
  if (k == 1) return 1.0;
  const double q = 1.0 - p;
  return 1.0 - pow_int(q, k) + 1.0 / static_cast<double>(k);
}

double cost_dorfman_prime(std::int64_t k, double p) {
  check_inputs(k, p);
  if (k == 1) return 1.0;
  const double q = 1.0 - p;
  const double kd = static_cast<double>(k);
  return 1.0 - pow_int(q, k) + 1.0 / kd - (1.0 / kd) * p * pow_int(q, k - 1);
}

double cost_sterrett(std::int64_t k, double p) {
  check_inputs(k, p);
  const double q = 1.0 - p;
  const double kd = static_cast<double>(k);
  // (1 - q^(k+1)) / (1 - q) as the geometric sum 1 + q + ... + q^k, which
  // stays accurate when p is tiny.
  const double geometric = -std::expm1(static_cast<double>(k + 1) * std::log1p(-p)) / p;
  return (2.0 * kd - (kd - 2.0) * q - geometric) / kd;
}

double per_person_cost(Procedure proc, std::int64_t k, double p) {
  switch (proc) {
    case Procedure::Dorfman: return cost_dorfman(k, p);
    case Procedure::DorfmanPrime: return cost_dorfman_prime(k, p);
    case Procedure::Sterrett: return cost_sterrett(k, p);
    default: break;
  }
  throw InvalidArgument("closed-form cost exists only for d, dp and s");
}

bool SizeSearchResult::in_window() const {
  return std::find(window.begin(), window.end(), k_star) != window.end();
}

std::int64_t default_k_max(double p) {
  if (!std::isfinite(p) || !(p > 0.0 && p < 1.0))
    throw InvalidArgument("probability out of open interval (0,1)");
  return static_cast<std::int64_t>(std::ceil(4.0 / std::sqrt(p))) + 10;
}

std::vector<std::int64_t> predicted_window(Procedure proc, double p) {
  switch (proc) {
    case Procedure::Dorfman: {
      if (p > samuels_individual_threshold()) return {1};
      const auto base = static_cast<std::int64_t>(std::floor(1.0 / std::sqrt(p)));
      return {1 + base, 2 + base};
    }
    case Procedure::DorfmanPrime: {
      const double r = 1.0 / std::sqrt(p);
      const auto lo = static_cast<std::int64_t>(std::floor(r));
      const auto hi = static_cast<std::int64_t>(std::ceil(r));
      if (lo == hi) return {lo};
      return {lo, hi};
    }
    case Procedure::Sterrett: {
      const auto base = static_cast<std::int64_t>(std::floor(std::sqrt(2.0 / p)));
      return {base, base + 1, base + 2};
    }
    default: break;
  }
  throw InvalidArgument("size windows exist only for d, dp and s");
}

SizeSearchResult optimal_size(Procedure proc, double p, std::optional<std::int64_t> k_max) {
  if (!is_partition_procedure(proc))
    throw InvalidArgument("optimal group size is defined only for d, dp and s");
  const std::int64_t limit = k_max.value_or(default_k_max(p));
  if (limit < 1) throw InvalidArgument("k_max must be at least 1");

  SizeSearchResult result;
  result.procedure = proc;
  result.k_max = limit;
  result.k_star = 1;
  result.per_person = per_person_cost(proc, 1, p);
  for (std::int64_t k = 2; k <= limit; ++k) {
    const double c = per_person_cost(proc, k, p);
    if (c < result.per_person) {
      result.per_person = c;
      result.k_star = k;
    }
  }
  result.window = predicted_window(proc, p);
  return result;
}

}  // namespace gtd
