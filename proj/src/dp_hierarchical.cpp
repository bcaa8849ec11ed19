#include <cmath>
#include <limits>

#include "gtd/dp.hpp"

namespace gtd {

HierValueTables::HierValueTables(std::size_t n, bool homogeneous)
    : n_(n), homogeneous_(homogeneous) {
  const std::size_t cells = homogeneous ? n + 1 : (n + 1) * (n + 1);
  h1_.assign(cells, 0.0);
  h2_.assign(cells, 0.0);
  choice1_.assign(cells, 0);
  choice2_.assign(cells, 0);
}

// The recursions run on unconditional costs: W2(B) = P(B positive) * h2(B).
// Multiplying the conditional recursion for a defective block B = A + R
// (A the pooled prefix) through by P(B positive) gives
//   W2(B) = P(B pos) + Q(A) * W2(R) + W2(A) + P(A pos) * h1(R),
// which has no divisions and the same argmin. h1 is unconditional already:
//   h1(B) = min_A [1 + W2(A) + h1(B \ A)].
struct HierSolver {
  static HierSolution solve(const PrevalenceSpec& spec) {
    const std::size_t n = spec.size();
    if (n > kMaxDpItems) throw InvalidArgument("population too large for the DP tables");
    return spec.is_homogeneous() ? homogeneous(spec) : heterogeneous(spec);
  }

  static HierSolution homogeneous(const PrevalenceSpec& spec) {
    const std::size_t n = spec.size();
    const double log_q = std::log1p(-spec.p());
    std::vector<double> miss(n + 1), hit(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      miss[k] = std::exp(static_cast<double>(k) * log_q);
      hit[k] = -std::expm1(static_cast<double>(k) * log_q);
    }

    HierValueTables t(n, true);
    std::vector<double> w2(n + 1, 0.0);
    for (std::size_t len = 1; len <= n; ++len) {
      if (len >= 2) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 1; x < len; ++x) {
          const double v = hit[len] + miss[x] * w2[len - x] + w2[x] + hit[x] * t.h1_[len - x];
          if (v < best) {
            best = v;
            t.choice2_[len] = x;
          }
        }
        w2[len] = best;
        t.h2_[len] = best / hit[len];
      }
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t x = 1; x <= len; ++x) {
        const double v = 1.0 + w2[x] + t.h1_[len - x];
        if (v < best) {
          best = v;
          t.choice1_[len] = x;
        }
      }
      t.h1_[len] = best;
    }

    DecisionPolicy policy(PolicyClass::Hierarchical, spec, t.h1_[n]);
    for (std::size_t len = 1; len <= n; ++len) {
      policy.set_rule(policy.key(0, 0, len), t.choice1_[len]);
      if (len >= 2) policy.set_rule(policy.key(0, len, 0), t.choice2_[len]);
    }
    return HierSolution{CostReport{Procedure::Hierarchical, t.h1_[n], n}, std::move(t),
                        std::move(policy)};
  }

  static HierSolution heterogeneous(const PrevalenceSpec& spec) {
    const std::size_t n = spec.size();
    const std::size_t stride = n + 1;
    HierValueTables t(n, false);
    std::vector<double> w2(stride * stride, 0.0);
    std::vector<double> miss(stride);

    for (std::size_t len = 1; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        const std::size_t j = i + len;
        for (std::size_t x = 0; x <= len; ++x) miss[x] = spec.miss_product(i, i + x);
        const double hit_all = 1.0 - miss[len];
        const std::size_t cell = i * stride + j;

        if (len >= 2) {
          double best = std::numeric_limits<double>::infinity();
          for (std::size_t x = 1; x < len; ++x) {
            const std::size_t split = i + x;
            const double v = hit_all + miss[x] * w2[split * stride + j] + w2[i * stride + split] +
                             (1.0 - miss[x]) * t.h1_[split * stride + j];
            if (v < best) {
              best = v;
              t.choice2_[cell] = x;
            }
          }
          w2[cell] = best;
          t.h2_[cell] = best / hit_all;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 1; x <= len; ++x) {
          const std::size_t split = i + x;
          const double v = 1.0 + w2[i * stride + split] + t.h1_[split * stride + j];
          if (v < best) {
            best = v;
            t.choice1_[cell] = x;
          }
        }
        t.h1_[cell] = best;
      }
    }

    const double total = t.h1_[n];
    DecisionPolicy policy(PolicyClass::Hierarchical, spec, total);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j) {
        policy.set_rule(policy.key(i, 0, j - i), t.choice1_[i * stride + j]);
        if (j - i >= 2) policy.set_rule(policy.key(i, j - i, 0), t.choice2_[i * stride + j]);
      }
    }
    return HierSolution{CostReport{Procedure::Hierarchical, total, n}, std::move(t), std::move(policy)};
  }
};

HierSolution solve_hier(const PrevalenceSpec& spec) { return HierSolver::solve(validate(spec)); }

}  // namespace gtd
