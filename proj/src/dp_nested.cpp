#include <cmath>
#include <limits>

#include "gtd/dp.hpp"

namespace gtd {

NestedValueTables::NestedValueTables(std::size_t n, bool homogeneous)
    : n_(n), homogeneous_(homogeneous) {
  f_.assign(n + 1, 0.0);
  f_choice_.assign(n + 1, 0);
  g_.assign((n + 1) * (n + 1), 0.0);
  g_choice_.assign((n + 1) * (n + 1), 0);
}

// As in the hierarchical solver the defective-set values are carried
// unconditionally, W(D, rest) = P(D positive) * G(D, rest):
//   W(D, rest) = P(D pos) + Q(A) * W(D \ A, rest) + W(A, (D \ A) + rest)
// for a pooled prefix A of D; a positive A releases D \ A to the front of
// the binomial set. With a single defective item W = p * F(rest).
struct NestedSolver {
  static NestedSolution solve(const PrevalenceSpec& spec) {
    if (spec.size() > kMaxDpItems) throw InvalidArgument("population too large for the DP tables");
    return spec.is_homogeneous() ? homogeneous(spec) : heterogeneous(spec);
  }

  static NestedSolution homogeneous(const PrevalenceSpec& spec) {
    const std::size_t n = spec.size();
    const std::size_t stride = n + 1;
    const double p = spec.p();
    const double log_q = std::log1p(-p);
    std::vector<double> miss(n + 1), hit(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      miss[k] = std::exp(static_cast<double>(k) * log_q);
      hit[k] = -std::expm1(static_cast<double>(k) * log_q);
    }

    NestedValueTables t(n, true);
    // w[m * stride + b]: defective set of m, binomial set of b.
    std::vector<double> w(stride * stride, 0.0);
    for (std::size_t total = 1; total <= n; ++total) {
      w[1 * stride + (total - 1)] = p * t.f_[total - 1];
      t.g_[1 * stride + (total - 1)] = t.f_[total - 1];
      for (std::size_t m = 2; m <= total; ++m) {
        const std::size_t b = total - m;
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t x = 1; x < m; ++x) {
          const double v = hit[m] + miss[x] * w[(m - x) * stride + b] + w[x * stride + (b + m - x)];
          if (v < best) {
            best = v;
            arg = x;
          }
        }
        w[m * stride + b] = best;
        t.g_[m * stride + b] = best / hit[m];
        t.g_choice_[m * stride + b] = arg;
      }
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t x = 1; x <= total; ++x) {
        const double v = 1.0 + miss[x] * t.f_[total - x] + w[x * stride + (total - x)];
        if (v < best) {
          best = v;
          t.f_choice_[total] = x;
        }
      }
      t.f_[total] = best;
    }

    DecisionPolicy policy(PolicyClass::Nested, spec, t.f_[n]);
    for (std::size_t total = 1; total <= n; ++total) {
      policy.set_rule(policy.key(0, 0, total), t.f_choice_[total]);
      for (std::size_t m = 2; m <= total; ++m)
        policy.set_rule(policy.key(0, m, total - m), t.g_choice_[m * stride + (total - m)]);
    }
    return NestedSolution{CostReport{Procedure::Nested, t.f_[n], n}, std::move(t), std::move(policy)};
  }

  static NestedSolution heterogeneous(const PrevalenceSpec& spec) {
    const std::size_t n = spec.size();
    const std::size_t stride = n + 1;
    NestedValueTables t(n, false);
    // w[s * stride + m]: defective block [s, s + m), binomial [s + m, n).
    std::vector<double> w(stride * stride, 0.0);
    std::vector<double> miss(stride);

    for (std::size_t s = n; s-- > 0;) {
      const std::size_t rest = n - s;
      for (std::size_t x = 0; x <= rest; ++x) miss[x] = spec.miss_product(s, s + x);

      w[s * stride + 1] = spec.prob(s) * t.f_[s + 1];
      t.g_[s * stride + 1] = t.f_[s + 1];
      for (std::size_t m = 2; m <= rest; ++m) {
        const double hit_all = 1.0 - miss[m];
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t x = 1; x < m; ++x) {
          const double v = hit_all + miss[x] * w[(s + x) * stride + (m - x)] + w[s * stride + x];
          if (v < best) {
            best = v;
            arg = x;
          }
        }
        w[s * stride + m] = best;
        t.g_[s * stride + m] = best / hit_all;
        t.g_choice_[s * stride + m] = arg;
      }
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t x = 1; x <= rest; ++x) {
        const double v = 1.0 + miss[x] * t.f_[s + x] + w[s * stride + x];
        if (v < best) {
          best = v;
          t.f_choice_[s] = x;
        }
      }
      t.f_[s] = best;
    }

    DecisionPolicy policy(PolicyClass::Nested, spec, t.f_[0]);
    for (std::size_t s = 0; s < n; ++s) {
      policy.set_rule(policy.key(s, 0, n - s), t.f_choice_[s]);
      for (std::size_t m = 2; m <= n - s; ++m)
        policy.set_rule(policy.key(s, m, n - s - m), t.g_choice_[s * stride + m]);
    }
    return NestedSolution{CostReport{Procedure::Nested, t.f_[0], n}, std::move(t), std::move(policy)};
  }
};

NestedSolution solve_nested(const PrevalenceSpec& spec) { return NestedSolver::solve(validate(spec)); }

double optimal_policy_cost(PolicyClass cls, const PrevalenceSpec& spec) {
  return cls == PolicyClass::Hierarchical ? solve_hier(spec).cost.expected_tests
                                          : solve_nested(spec).cost.expected_tests;
}

}  // namespace gtd
