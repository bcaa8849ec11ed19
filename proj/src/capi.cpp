#include "gtd/gtd.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "gtd/bounds.hpp"
#include "gtd/closed_form.hpp"
#include "gtd/dp.hpp"
#include "gtd/partition.hpp"
#include "gtd/simulation.hpp"
#include "gtd/tables.hpp"

struct gtd_spec {
  gtd::PrevalenceSpec value;
};

struct gtd_partition {
  gtd::PartitionDesign value;
};

struct gtd_policy {
  gtd::DecisionPolicy value;
};

namespace {

thread_local std::string last_error;

gtd_status fail(gtd_status status, const char* message) {
  last_error = message;
  return status;
}

template <class Fn>
gtd_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return GTD_OK;
  } catch (const gtd::InvalidArgument& e) {
    return fail(GTD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const gtd::OutOfRange& e) {
    return fail(GTD_ERR_OUT_OF_RANGE, e.what());
  } catch (const gtd::PolicyError& e) {
    return fail(GTD_ERR_POLICY, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GTD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GTD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GTD_ERR_INTERNAL, "unknown error");
  }
}

gtd::Procedure to_cpp(gtd_procedure proc) {
  switch (proc) {
    case GTD_PROC_DORFMAN: return gtd::Procedure::Dorfman;
    case GTD_PROC_DORFMAN_PRIME: return gtd::Procedure::DorfmanPrime;
    case GTD_PROC_STERRETT: return gtd::Procedure::Sterrett;
    case GTD_PROC_HIERARCHICAL: return gtd::Procedure::Hierarchical;
    case GTD_PROC_NESTED: return gtd::Procedure::Nested;
  }
  throw gtd::InvalidArgument("unknown procedure code");
}

gtd_procedure to_c(gtd::Procedure proc) {
  switch (proc) {
    case gtd::Procedure::Dorfman: return GTD_PROC_DORFMAN;
    case gtd::Procedure::DorfmanPrime: return GTD_PROC_DORFMAN_PRIME;
    case gtd::Procedure::Sterrett: return GTD_PROC_STERRETT;
    case gtd::Procedure::Hierarchical: return GTD_PROC_HIERARCHICAL;
    case gtd::Procedure::Nested: return GTD_PROC_NESTED;
  }
  return GTD_PROC_DORFMAN;
}

template <class T>
void require(const T* ptr, const char* what) {
  if (ptr == nullptr) throw gtd::InvalidArgument(std::string(what) + " is null");
}

void fill(const gtd::SimulationReport& r, gtd_sim_report* out) {
  out->replicates = r.replicates;
  out->mean_tests = r.mean_tests;
  out->has_standard_error = r.standard_error.has_value() ? 1 : 0;
  out->standard_error = r.standard_error.value_or(0.0);
  out->analytic_expectation = r.analytic_expectation;
  out->seed = r.seed;
  out->audited = r.audited ? 1 : 0;
  out->audit_failures = r.audit_failures;
  out->implied_tests = r.implied_tests;
  out->classification_errors = r.classification_errors;
}

void fill(const gtd::ExecutionTrace& t, gtd_trace_summary* out) {
  out->tests_performed = t.tests_performed;
  out->implied_tests = t.implied_tests;
  out->audit_ok = t.audit_ok ? 1 : 0;
  out->classification_ok = t.classification_ok ? 1 : 0;
}

size_t copy_grid(const std::vector<double>& grid, double* out, size_t cap) {
  if (out != nullptr) std::copy_n(grid.begin(), std::min(cap, grid.size()), out);
  return grid.size();
}

}  // namespace

extern "C" {

const char* gtd_last_error(void) { return last_error.c_str(); }

const char* gtd_status_name(gtd_status status) {
  switch (status) {
    case GTD_OK: return "ok";
    case GTD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GTD_ERR_OUT_OF_RANGE: return "out of range";
    case GTD_ERR_IO: return "i/o error";
    case GTD_ERR_POLICY: return "policy error";
    case GTD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

gtd_status gtd_parse_procedure(const char* name, gtd_procedure* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = to_c(gtd::parse_procedure(name));
  });
}

const char* gtd_procedure_name(gtd_procedure proc) {
  switch (proc) {
    case GTD_PROC_DORFMAN: return "d";
    case GTD_PROC_DORFMAN_PRIME: return "dp";
    case GTD_PROC_STERRETT: return "s";
    case GTD_PROC_HIERARCHICAL: return "hier";
    case GTD_PROC_NESTED: return "nested";
  }
  return "?";
}

gtd_status gtd_spec_homogeneous(double p, size_t n, gtd_spec** out) {
  return guarded([&] {
    require(out, "out");
    *out = new gtd_spec{gtd::PrevalenceSpec::homogeneous(p, n)};
  });
}

gtd_status gtd_spec_heterogeneous(const double* probs, size_t n, gtd_spec** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(probs, "probs");
    std::vector<double> values(probs, probs + n);
    *out = new gtd_spec{gtd::PrevalenceSpec::heterogeneous(std::move(values))};
  });
}

gtd_status gtd_spec_load(const char* path, gtd_spec** out) {
  const gtd_status status = guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gtd_spec{gtd::load_probs_file(path)};
  });
  if (status == GTD_ERR_INVALID_ARGUMENT && last_error.rfind("cannot read", 0) == 0) return GTD_ERR_IO;
  return status;
}

gtd_status gtd_spec_sorted(const gtd_spec* spec, gtd_spec** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new gtd_spec{spec->value.sorted_ascending()};
  });
}

void gtd_spec_free(gtd_spec* spec) { delete spec; }

size_t gtd_spec_size(const gtd_spec* spec) { return spec ? spec->value.size() : 0; }

int gtd_spec_is_homogeneous(const gtd_spec* spec) {
  return spec && spec->value.is_homogeneous() ? 1 : 0;
}

gtd_status gtd_spec_prob(const gtd_spec* spec, size_t i, double* out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = spec->value.prob(i);
  });
}

gtd_status gtd_spec_miss_product(const gtd_spec* spec, size_t begin, size_t end, double* out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = spec->value.miss_product(begin, end);
  });
}

double gtd_ungar_threshold(void) { return gtd::ungar_threshold(); }

double gtd_samuels_threshold(void) { return gtd::samuels_individual_threshold(); }

gtd_status gtd_cost_per_person(gtd_procedure proc, int64_t k, double p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = gtd::per_person_cost(to_cpp(proc), k, p);
  });
}

gtd_status gtd_optimal_size(gtd_procedure proc, double p, int64_t k_max, gtd_size_result* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = gtd::optimal_size(to_cpp(proc), p,
                                     k_max > 0 ? std::optional<std::int64_t>(k_max) : std::nullopt);
    out->k_star = r.k_star;
    out->per_person = r.per_person;
    out->k_max = r.k_max;
    out->window_size = std::min<size_t>(r.window.size(), 3);
    for (size_t i = 0; i < 3; ++i) out->window[i] = i < r.window.size() ? r.window[i] : 0;
    out->in_window = r.in_window() ? 1 : 0;
  });
}

gtd_status gtd_group_cost(gtd_procedure proc, const gtd_spec* spec, size_t begin, size_t end,
                          double* out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = gtd::group_cost(to_cpp(proc), spec->value, begin, end);
  });
}

gtd_status gtd_partition_optimal(gtd_procedure proc, const gtd_spec* spec, int presort,
                                 gtd_partition** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    const gtd::Procedure p = to_cpp(proc);
    const auto& s = spec->value;
    *out = new gtd_partition{s.is_homogeneous()
                                 ? gtd::optimal_partition_homogeneous(p, s.p(), s.size())
                                 : gtd::optimal_ordered_partition(p, s, presort != 0)};
  });
}

void gtd_partition_free(gtd_partition* partition) { delete partition; }

gtd_procedure gtd_partition_procedure(const gtd_partition* partition) {
  return partition ? to_c(partition->value.cost.procedure) : GTD_PROC_DORFMAN;
}

double gtd_partition_expected_tests(const gtd_partition* partition) {
  return partition ? partition->value.cost.expected_tests : 0.0;
}

size_t gtd_partition_size(const gtd_partition* partition) {
  return partition ? partition->value.cost.population : 0;
}

size_t gtd_partition_group_count(const gtd_partition* partition) {
  return partition ? partition->value.partition.groups.size() : 0;
}

gtd_status gtd_partition_group(const gtd_partition* partition, size_t index, size_t* size,
                               double* cost) {
  return guarded([&] {
    require(partition, "partition");
    const auto& d = partition->value;
    if (index >= d.partition.groups.size()) throw gtd::OutOfRange("group index out of range");
    if (size) *size = d.partition.groups[index];
    if (cost) *cost = d.group_costs[index];
  });
}

gtd_status gtd_partition_item(const gtd_partition* partition, size_t position, size_t* item) {
  return guarded([&] {
    require(partition, "partition");
    require(item, "item");
    const auto& order = partition->value.item_order;
    if (position >= order.size()) throw gtd::OutOfRange("item position out of range");
    *item = order[position];
  });
}

int gtd_partition_presorted(const gtd_partition* partition) {
  return partition && partition->value.presorted ? 1 : 0;
}

int gtd_partition_globally_optimal(const gtd_partition* partition) {
  return partition && partition->value.globally_optimal ? 1 : 0;
}

gtd_status gtd_solve(gtd_procedure proc, const gtd_spec* spec, gtd_policy** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    switch (proc) {
      case GTD_PROC_HIERARCHICAL: *out = new gtd_policy{gtd::solve_hier(spec->value).policy}; break;
      case GTD_PROC_NESTED: *out = new gtd_policy{gtd::solve_nested(spec->value).policy}; break;
      default: throw gtd::InvalidArgument("policies are solved for hier or nested only");
    }
  });
}

void gtd_policy_free(gtd_policy* policy) { delete policy; }

gtd_procedure gtd_policy_procedure(const gtd_policy* policy) {
  return policy && policy->value.policy_class() == gtd::PolicyClass::Hierarchical
             ? GTD_PROC_HIERARCHICAL
             : GTD_PROC_NESTED;
}

double gtd_policy_expected_tests(const gtd_policy* policy) {
  return policy ? policy->value.expected_tests() : 0.0;
}

size_t gtd_policy_size(const gtd_policy* policy) { return policy ? policy->value.spec().size() : 0; }

size_t gtd_policy_rule_count(const gtd_policy* policy) {
  return policy ? policy->value.rules().size() : 0;
}

gtd_status gtd_policy_test_size(const gtd_policy* policy, size_t start, size_t defective,
                                size_t binomial, size_t* out) {
  return guarded([&] {
    require(policy, "policy");
    require(out, "out");
    *out = policy->value.test_size(policy->value.key(start, defective, binomial));
  });
}

gtd_status gtd_policy_save(const gtd_policy* policy, const char* path) {
  const gtd_status status = guarded([&] {
    require(policy, "policy");
    require(path, "path");
    policy->value.save(path);
  });
  return status == GTD_ERR_POLICY && last_error.rfind("cannot", 0) == 0 ? GTD_ERR_IO : status;
}

gtd_status gtd_policy_load(const char* path, gtd_policy** out) {
  const gtd_status status = guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gtd_policy{gtd::DecisionPolicy::load(path)};
  });
  return status == GTD_ERR_POLICY && last_error.rfind("cannot", 0) == 0 ? GTD_ERR_IO : status;
}

gtd_status gtd_policy_to_json(const gtd_policy* policy, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(policy, "policy");
    const std::string text = policy->value.to_json();
    if (needed) *needed = text.size() + 1;
    if (buf != nullptr && cap > 0) {
      const size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

gtd_status gtd_entropy(const gtd_spec* spec, double* out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = gtd::shannon_entropy(spec->value);
  });
}

gtd_status gtd_huffman_bound(const gtd_spec* spec, size_t cap, double* out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = gtd::huffman_bound(spec->value, cap == 0 ? gtd::kDefaultHuffmanCap : cap);
  });
}

gtd_status gtd_bell_number(int n, uint64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = gtd::bell_number(n);
  });
}

gtd_status gtd_simulate_partition(const gtd_partition* partition, size_t replicates, uint64_t seed,
                                  int audit, gtd_sim_report* out) {
  return guarded([&] {
    require(partition, "partition");
    require(out, "out");
    fill(gtd::monte_carlo(gtd::pooling_design(partition->value), replicates, seed, audit != 0), out);
  });
}

gtd_status gtd_simulate_policy(const gtd_policy* policy, size_t replicates, uint64_t seed, int audit,
                               gtd_sim_report* out) {
  return guarded([&] {
    require(policy, "policy");
    require(out, "out");
    fill(gtd::monte_carlo(policy->value, replicates, seed, audit != 0), out);
  });
}

gtd_status gtd_execute_partition(const gtd_partition* partition, const uint8_t* defects, size_t n,
                                 int audit, gtd_trace_summary* out) {
  return guarded([&] {
    require(partition, "partition");
    require(defects, "defects");
    require(out, "out");
    const gtd::PoolingPlan plan{partition->value.cost.procedure, partition->value.partition};
    fill(gtd::execute(plan, std::span<const std::uint8_t>(defects, n), {audit != 0, false}), out);
  });
}

gtd_status gtd_execute_policy(const gtd_policy* policy, const uint8_t* defects, size_t n, int audit,
                              gtd_trace_summary* out) {
  return guarded([&] {
    require(policy, "policy");
    require(defects, "defects");
    require(out, "out");
    fill(gtd::execute(policy->value, std::span<const std::uint8_t>(defects, n), {audit != 0, false}),
         out);
  });
}

gtd_status gtd_sample_population(const gtd_spec* spec, uint64_t seed, uint8_t* out, size_t n) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    if (n != spec->value.size()) throw gtd::InvalidArgument("output length does not match the population size");
    gtd::RngStream rng(seed);
    const auto defects = gtd::sample_population(spec->value, rng);
    std::copy(defects.begin(), defects.end(), out);
  });
}

gtd_status gtd_sample_beta_spec(double p_mean, size_t n, uint64_t seed, gtd_spec** out) {
  return guarded([&] {
    require(out, "out");
    gtd::RngStream rng(seed);
    *out = new gtd_spec{gtd::sample_prevalence_beta(p_mean, n, rng)};
  });
}

size_t gtd_table1_grid(double* out, size_t cap) { return copy_grid(gtd::table1_grid(), out, cap); }

size_t gtd_table2_grid(double* out, size_t cap) { return copy_grid(gtd::table2_grid(), out, cap); }

gtd_status gtd_table1_row_compute(double p, size_t n, gtd_table1_row* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = gtd::table1_row(p, n);
    *out = gtd_table1_row{r.p, r.n, r.dorfman_prime, r.sterrett, r.hierarchical, r.nested, r.entropy};
  });
}

gtd_status gtd_table2_row_compute(double p_mean, size_t n, size_t draws, uint64_t seed,
                                  gtd_table2_row* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = gtd::table2_experiment(p_mean, n, draws, seed);
    *out = gtd_table2_row{r.p,        n,           r.draws,          r.dorfman, r.dorfman_prime,
                          r.sterrett, r.hierarchical, r.nested, r.entropy};
  });
}

}  // extern "C"
