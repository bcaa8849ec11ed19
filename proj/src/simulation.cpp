#include "gtd/simulation.hpp"

#include <cmath>
#include <limits>

#include "gtd/bounds.hpp"
#include "gtd/dp.hpp"

namespace gtd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RngStream RngStream::substream(std::uint64_t seed, std::uint64_t index) {
  return RngStream(splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL));
}

std::uint64_t RngStream::next() {
  ++position_;
  return engine_();
}

double RngStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<std::uint8_t> sample_population(const PrevalenceSpec& spec, RngStream& rng) {
  std::vector<std::uint8_t> defects(spec.size());
  for (std::size_t i = 0; i < defects.size(); ++i) defects[i] = rng.bernoulli(spec.prob(i)) ? 1 : 0;
  return defects;
}

PrevalenceSpec sample_prevalence_beta(double p_mean, std::size_t n, RngStream& rng) {
  if (!std::isfinite(p_mean) || !(p_mean > 0.0 && p_mean < 1.0))
    throw InvalidArgument("mean prevalence out of open interval (0,1)");
  if (n < 1) throw InvalidArgument("population size must be at least 1");
  const double beta = (1.0 - p_mean) / p_mean;
  const double below_one = std::nextafter(1.0, 0.0);
  std::vector<double> probs(n);
  for (auto& x : probs) {
    // Beta(1, beta) CDF is 1 - (1 - x)^beta.
    const double u = rng.uniform_open();
    x = -std::expm1(std::log1p(-u) / beta);
    if (x >= 1.0) x = below_one;
    if (x <= 0.0) x = std::numeric_limits<double>::denorm_min();
  }
  return PrevalenceSpec::heterogeneous(std::move(probs));
}

namespace {

// What a tester knows after a sequence of pool results: items proven good,
// items proven defective, and positive pools not yet explained by a known
// defective. Closed under unit propagation after every result.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(std::size_t n) : status_(n, kUnknown) {}

  bool implied(std::size_t begin, std::size_t end) const {
    bool all_good = true;
    for (std::size_t i = begin; i < end; ++i) {
      if (status_[i] == kDefective) return true;
      if (status_[i] != kGood) all_good = false;
    }
    if (all_good) return true;
    for (const auto& [pb, pe] : pools_) {
      bool outside_good = true;
      for (std::size_t i = pb; i < pe && outside_good; ++i)
        if ((i < begin || i >= end) && status_[i] != kGood) outside_good = false;
      if (outside_good) return true;
    }
    return false;
  }

  void record(std::size_t begin, std::size_t end, bool positive) {
    if (!positive) {
      for (std::size_t i = begin; i < end; ++i) status_[i] = kGood;
    } else {
      pools_.emplace_back(begin, end);
    }
    propagate();
  }

  bool is_defective(std::size_t i) const { return status_[i] == kDefective; }
  bool is_known(std::size_t i) const { return status_[i] != kUnknown; }

 private:
  static constexpr std::int8_t kUnknown = 0;
  static constexpr std::int8_t kGood = 1;
  static constexpr std::int8_t kDefective = 2;

  void propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < pools_.size();) {
        const auto [pb, pe] = pools_[k];
        std::size_t unknown = 0, last_unknown = pb;
        bool explained = false;
        for (std::size_t i = pb; i < pe; ++i) {
          if (status_[i] == kDefective) explained = true;
          if (status_[i] == kUnknown) {
            ++unknown;
            last_unknown = i;
          }
        }
        if (!explained && unknown == 1) {
          status_[last_unknown] = kDefective;
          explained = true;
          changed = true;
        }
        if (explained) {
          pools_[k] = pools_.back();
          pools_.pop_back();
        } else {
          ++k;
        }
      }
    }
  }

  std::vector<std::int8_t> status_;
  std::vector<std::pair<std::size_t, std::size_t>> pools_;
};

class Executor {
 public:
  Executor(std::span<const std::uint8_t> defects, ExecuteOptions options)
      : defects_(defects), options_(options), classification_(defects.size(), 0) {
    if (options_.audit) kb_.emplace(defects.size());
    trace_.audited = options_.audit;
  }

  bool pool(std::size_t begin, std::size_t end) {
    if (begin >= end || end > defects_.size()) throw PolicyError("pool outside the population");
    bool positive = false;
    for (std::size_t i = begin; i < end && !positive; ++i) positive = defects_[i] != 0;
    ++trace_.tests_performed;
    bool implied = false;
    if (kb_) {
      implied = kb_->implied(begin, end);
      kb_->record(begin, end, positive);
      if (implied) {
        ++trace_.implied_tests;
        trace_.audit_ok = false;
      }
    }
    if (options_.record_tests) trace_.tests.push_back(TestRecord{begin, end, positive, implied});
    return positive;
  }

  void mark_good(std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) classification_[i] = 0;
  }
  void mark_defective(std::size_t i) { classification_[i] = 1; }

  ExecutionTrace finish() {
    trace_.classification = classification_;
    trace_.classification_ok = true;
    for (std::size_t i = 0; i < defects_.size(); ++i) {
      const bool truth = defects_[i] != 0;
      if ((classification_[i] != 0) != truth) trace_.classification_ok = false;
      // Every classification must also be provable from the results alone.
      if (kb_ && (!kb_->is_known(i) || kb_->is_defective(i) != truth)) trace_.classification_ok = false;
    }
    return std::move(trace_);
  }

 private:
  std::span<const std::uint8_t> defects_;
  ExecuteOptions options_;
  std::vector<std::uint8_t> classification_;
  std::optional<KnowledgeBase> kb_;
  ExecutionTrace trace_;
};

void run_dorfman(Executor& ex, std::size_t b, std::size_t e, bool skip_last) {
  const bool positive = ex.pool(b, e);
  if (e - b == 1) {
    if (positive) ex.mark_defective(b);
    return;
  }
  if (!positive) {
    ex.mark_good(b, e);
    return;
  }
  bool any_defective = false;
  for (std::size_t i = b; i + 1 < e; ++i) {
    if (ex.pool(i, i + 1)) {
      ex.mark_defective(i);
      any_defective = true;
    }
  }
  if (skip_last && !any_defective) {
    ex.mark_defective(e - 1);
  } else if (ex.pool(e - 1, e)) {
    ex.mark_defective(e - 1);
  }
}

void run_sterrett(Executor& ex, std::size_t b, std::size_t e) {
  while (b < e) {
    const bool positive = ex.pool(b, e);
    if (!positive) {
      ex.mark_good(b, e);
      return;
    }
    if (e - b == 1) {
      ex.mark_defective(b);
      return;
    }
    // One by one until the first positive; the last member is inferred.
    bool found = false;
    while (e - b > 1) {
      const bool item_positive = ex.pool(b, b + 1);
      ++b;
      if (item_positive) {
        ex.mark_defective(b - 1);
        found = true;
        break;
      }
    }
    if (!found) {
      ex.mark_defective(b);
      return;
    }
  }
}

class PolicyRunner {
 public:
  PolicyRunner(const DecisionPolicy& policy, Executor& ex) : policy_(policy), ex_(ex) {}

  void run_hierarchical(std::size_t n) { resolve_binomial(0, n); }

  void run_nested(std::size_t n) {
    std::size_t s = 0, m = 0;
    while (s < n) {
      if (m == 1) {
        ex_.mark_defective(s);
        ++s;
        m = 0;
        continue;
      }
      const std::size_t x = policy_.test_size(policy_.key(s, m, n - s - m));
      const std::size_t limit = m > 0 ? m - 1 : n - s;
      if (x < 1 || x > limit) throw PolicyError("policy pool size infeasible for its state");
      if (!ex_.pool(s, s + x)) {
        ex_.mark_good(s, s + x);
        s += x;
        if (m > 0) m -= x;
      } else if (x == 1) {
        ex_.mark_defective(s);
        ++s;
        m = 0;
      } else {
        m = x;
      }
    }
  }

 private:
  void resolve_binomial(std::size_t b, std::size_t e) {
    while (b < e) {
      const std::size_t x = policy_.test_size(policy_.key(b, 0, e - b));
      if (x < 1 || x > e - b) throw PolicyError("policy pool size infeasible for its state");
      if (!ex_.pool(b, b + x)) {
        ex_.mark_good(b, b + x);
      } else {
        resolve_defective(b, b + x);
      }
      b += x;
    }
  }

  void resolve_defective(std::size_t b, std::size_t e) {
    while (e - b >= 2) {
      const std::size_t x = policy_.test_size(policy_.key(b, e - b, 0));
      if (x < 1 || x >= e - b) throw PolicyError("policy pool size infeasible for its state");
      if (!ex_.pool(b, b + x)) {
        ex_.mark_good(b, b + x);
        b += x;
        continue;
      }
      resolve_defective(b, b + x);
      resolve_binomial(b + x, e);
      return;
    }
    ex_.mark_defective(b);
  }

  const DecisionPolicy& policy_;
  Executor& ex_;
};

double sample_se(double sum, double sum_sq, std::size_t count) {
  const double n = static_cast<double>(count);
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  return std::sqrt(var / n);
}

}  // namespace

ExecutionTrace execute(const PoolingPlan& plan, std::span<const std::uint8_t> defects,
                       ExecuteOptions options) {
  if (!is_partition_procedure(plan.procedure))
    throw InvalidArgument("pooling plans run d, dp or s only");
  plan.partition.check(defects.size());
  Executor ex(defects, options);
  std::size_t b = 0;
  for (std::size_t g : plan.partition.groups) {
    switch (plan.procedure) {
      case Procedure::Dorfman: run_dorfman(ex, b, b + g, false); break;
      case Procedure::DorfmanPrime: run_dorfman(ex, b, b + g, true); break;
      default: run_sterrett(ex, b, b + g); break;
    }
    b += g;
  }
  return ex.finish();
}

ExecutionTrace execute(const DecisionPolicy& policy, std::span<const std::uint8_t> defects,
                       ExecuteOptions options) {
  if (defects.size() != policy.spec().size())
    throw PolicyError("policy population size does not match the defect vector");
  Executor ex(defects, options);
  PolicyRunner runner(policy, ex);
  if (policy.policy_class() == PolicyClass::Hierarchical)
    runner.run_hierarchical(defects.size());
  else
    runner.run_nested(defects.size());
  return ex.finish();
}

std::optional<double> SimulationReport::z_score() const {
  if (!standard_error || *standard_error <= 0.0) return std::nullopt;
  return std::abs(mean_tests - analytic_expectation) / *standard_error;
}

PoolingDesign pooling_design(const PartitionDesign& design) {
  return PoolingDesign{PoolingPlan{design.cost.procedure, design.partition},
                       PrevalenceSpec::heterogeneous(design.ordered_probs),
                       design.cost.expected_tests};
}

SimulationReport monte_carlo(const SimulationDesign& design, std::size_t replicates,
                             std::uint64_t seed, bool audit) {
  if (replicates < 1) throw InvalidArgument("replicates must be at least 1");
  const auto* pooling = std::get_if<PoolingDesign>(&design);
  const auto* policy = std::get_if<DecisionPolicy>(&design);
  const PrevalenceSpec& spec = pooling ? pooling->spec : policy->spec();

  SimulationReport report;
  report.procedure = pooling ? std::string(to_string(pooling->plan.procedure))
                             : std::string(to_string(policy->policy_class()));
  report.replicates = replicates;
  report.seed = seed;
  report.audited = audit;
  report.analytic_expectation = pooling ? pooling->analytic_expectation : policy->expected_tests();

  CompensatedSum sum, sum_sq;
  const ExecuteOptions options{audit, false};
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng = RngStream::substream(seed, r);
    const auto defects = sample_population(spec, rng);
    const ExecutionTrace trace =
        pooling ? execute(pooling->plan, defects, options) : execute(*policy, defects, options);
    const auto tests = static_cast<double>(trace.tests_performed);
    sum.add(tests);
    sum_sq.add(tests * tests);
    if (!trace.audit_ok) ++report.audit_failures;
    report.implied_tests += trace.implied_tests;
    if (!trace.classification_ok) ++report.classification_errors;
  }
  report.mean_tests = sum.value() / static_cast<double>(replicates);
  if (replicates > 1) report.standard_error = sample_se(sum.value(), sum_sq.value(), replicates);
  return report;
}

Table2Row average_optimal_costs(double p_label, std::span<const PrevalenceSpec> specs) {
  Table2Row row;
  row.p = p_label;
  row.draws = specs.size();
  if (specs.empty()) return row;
  CompensatedSum d, dp, s, hl, on, h;
  for (const PrevalenceSpec& raw : specs) {
    const PrevalenceSpec spec = raw.sorted_ascending();
    d.add(optimal_ordered_partition(Procedure::Dorfman, spec, false).cost.expected_tests);
    dp.add(optimal_ordered_partition(Procedure::DorfmanPrime, spec, false).cost.expected_tests);
    s.add(optimal_ordered_partition(Procedure::Sterrett, spec, false).cost.expected_tests);
    hl.add(solve_hier(spec).cost.expected_tests);
    on.add(solve_nested(spec).cost.expected_tests);
    h.add(shannon_entropy(spec));
  }
  const auto m = static_cast<double>(specs.size());
  row.dorfman = d.value() / m;
  row.dorfman_prime = dp.value() / m;
  row.sterrett = s.value() / m;
  row.hierarchical = hl.value() / m;
  row.nested = on.value() / m;
  row.entropy = h.value() / m;
  return row;
}

Table2Row table2_experiment(double p_mean, std::size_t n, std::size_t draws, std::uint64_t seed) {
  if (draws < 1) throw InvalidArgument("draw count must be at least 1");
  std::vector<PrevalenceSpec> specs;
  specs.reserve(draws);
  for (std::size_t m = 0; m < draws; ++m) {
    RngStream rng = RngStream::substream(seed, m);
    specs.push_back(sample_prevalence_beta(p_mean, n, rng));
  }
  return average_optimal_costs(p_mean, specs);
}

}  // namespace gtd
