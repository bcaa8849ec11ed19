/*
 * C interface to the group-testing design library.
 *
 * Every function that can fail returns a gtd_status; on failure the message
 * is available from gtd_last_error() on the same thread until the next call.
 * Handles are opaque and owned by the caller: free each with its *_free.
 * Item indices are zero-based, ranges half-open [begin, end).
 */
#ifndef GTD_GTD_H
#define GTD_GTD_H

#include <stddef.h>
#include <stdint.h>

#if defined(GTD_BUILDING_LIBRARY)
#define GTD_API __attribute__((visibility("default")))
#else
#define GTD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gtd_status {
  GTD_OK = 0,
  GTD_ERR_INVALID_ARGUMENT = 1,
  GTD_ERR_OUT_OF_RANGE = 2,
  GTD_ERR_IO = 3,
  GTD_ERR_POLICY = 4,
  GTD_ERR_INTERNAL = 5
} gtd_status;

typedef enum gtd_procedure {
  GTD_PROC_DORFMAN = 0,
  GTD_PROC_DORFMAN_PRIME = 1,
  GTD_PROC_STERRETT = 2,
  GTD_PROC_HIERARCHICAL = 3,
  GTD_PROC_NESTED = 4
} gtd_procedure;

typedef struct gtd_spec gtd_spec;
typedef struct gtd_partition gtd_partition;
typedef struct gtd_policy gtd_policy;

GTD_API const char* gtd_last_error(void);
GTD_API const char* gtd_status_name(gtd_status status);

/* "d", "dp", "s", "hier", "nested" */
GTD_API gtd_status gtd_parse_procedure(const char* name, gtd_procedure* out);
GTD_API const char* gtd_procedure_name(gtd_procedure proc);

/* ---- population models ------------------------------------------------ */

GTD_API gtd_status gtd_spec_homogeneous(double p, size_t n, gtd_spec** out);
GTD_API gtd_status gtd_spec_heterogeneous(const double* probs, size_t n, gtd_spec** out);
/* JSON file of the form {"probs": [...]} */
GTD_API gtd_status gtd_spec_load(const char* path, gtd_spec** out);
/* Heterogeneous copy sorted by ascending probability. */
GTD_API gtd_status gtd_spec_sorted(const gtd_spec* spec, gtd_spec** out);
GTD_API void gtd_spec_free(gtd_spec* spec);
GTD_API size_t gtd_spec_size(const gtd_spec* spec);
GTD_API int gtd_spec_is_homogeneous(const gtd_spec* spec);
GTD_API gtd_status gtd_spec_prob(const gtd_spec* spec, size_t i, double* out);
GTD_API gtd_status gtd_spec_miss_product(const gtd_spec* spec, size_t begin, size_t end, double* out);

/* ---- closed forms (unbounded population, equal pools) ----------------- */

GTD_API double gtd_ungar_threshold(void);
GTD_API double gtd_samuels_threshold(void);

/* Per-person expected tests for d, dp or s with pools of k. */
GTD_API gtd_status gtd_cost_per_person(gtd_procedure proc, int64_t k, double p, double* out);

typedef struct gtd_size_result {
  int64_t k_star;
  double per_person;
  int64_t k_max;
  int64_t window[3];
  size_t window_size;
  int in_window;
} gtd_size_result;

/* k_max <= 0 selects the default ceil(4 / sqrt(p)) + 10. */
GTD_API gtd_status gtd_optimal_size(gtd_procedure proc, double p, int64_t k_max, gtd_size_result* out);

/* ---- pool partitions --------------------------------------------------- */

GTD_API gtd_status gtd_group_cost(gtd_procedure proc, const gtd_spec* spec, size_t begin, size_t end,
                                  double* out);

/* Homogeneous specs use the size DP; heterogeneous ones the interval DP over
 * the item order (sorted ascending first when presort is non-zero). */
GTD_API gtd_status gtd_partition_optimal(gtd_procedure proc, const gtd_spec* spec, int presort,
                                         gtd_partition** out);
GTD_API void gtd_partition_free(gtd_partition* partition);
GTD_API gtd_procedure gtd_partition_procedure(const gtd_partition* partition);
GTD_API double gtd_partition_expected_tests(const gtd_partition* partition);
GTD_API size_t gtd_partition_size(const gtd_partition* partition);
GTD_API size_t gtd_partition_group_count(const gtd_partition* partition);
GTD_API gtd_status gtd_partition_group(const gtd_partition* partition, size_t index, size_t* size,
                                       double* cost);
/* Original item index at a position of the pooled order. */
GTD_API gtd_status gtd_partition_item(const gtd_partition* partition, size_t position, size_t* item);
GTD_API int gtd_partition_presorted(const gtd_partition* partition);
/* Zero when the result is optimal only among ordered partitions. */
GTD_API int gtd_partition_globally_optimal(const gtd_partition* partition);

/* ---- optimal adaptive policies ----------------------------------------- */

/* proc must be GTD_PROC_HIERARCHICAL or GTD_PROC_NESTED. */
GTD_API gtd_status gtd_solve(gtd_procedure proc, const gtd_spec* spec, gtd_policy** out);
GTD_API void gtd_policy_free(gtd_policy* policy);
GTD_API gtd_procedure gtd_policy_procedure(const gtd_policy* policy);
GTD_API double gtd_policy_expected_tests(const gtd_policy* policy);
GTD_API size_t gtd_policy_size(const gtd_policy* policy);
GTD_API size_t gtd_policy_rule_count(const gtd_policy* policy);
GTD_API gtd_status gtd_policy_test_size(const gtd_policy* policy, size_t start, size_t defective,
                                        size_t binomial, size_t* out);
GTD_API gtd_status gtd_policy_save(const gtd_policy* policy, const char* path);
GTD_API gtd_status gtd_policy_load(const char* path, gtd_policy** out);
/* Copies at most cap bytes including the terminator; *needed receives the
 * full length plus one. */
GTD_API gtd_status gtd_policy_to_json(const gtd_policy* policy, char* buf, size_t cap, size_t* needed);

/* ---- information bounds ------------------------------------------------ */

GTD_API gtd_status gtd_entropy(const gtd_spec* spec, double* out);
/* cap == 0 selects the default of 16 items. */
GTD_API gtd_status gtd_huffman_bound(const gtd_spec* spec, size_t cap, double* out);
GTD_API gtd_status gtd_bell_number(int n, uint64_t* out);

/* ---- simulation -------------------------------------------------------- */

typedef struct gtd_sim_report {
  size_t replicates;
  double mean_tests;
  double standard_error;
  int has_standard_error;
  double analytic_expectation;
  uint64_t seed;
  int audited;
  size_t audit_failures;
  size_t implied_tests;
  size_t classification_errors;
} gtd_sim_report;

typedef struct gtd_trace_summary {
  size_t tests_performed;
  size_t implied_tests;
  int audit_ok;
  int classification_ok;
} gtd_trace_summary;

GTD_API gtd_status gtd_simulate_partition(const gtd_partition* partition, size_t replicates,
                                          uint64_t seed, int audit, gtd_sim_report* out);
GTD_API gtd_status gtd_simulate_policy(const gtd_policy* policy, size_t replicates, uint64_t seed,
                                       int audit, gtd_sim_report* out);
/* Positions of defects follow the partition's pooled order. */
GTD_API gtd_status gtd_execute_partition(const gtd_partition* partition, const uint8_t* defects,
                                         size_t n, int audit, gtd_trace_summary* out);
GTD_API gtd_status gtd_execute_policy(const gtd_policy* policy, const uint8_t* defects, size_t n,
                                      int audit, gtd_trace_summary* out);
GTD_API gtd_status gtd_sample_population(const gtd_spec* spec, uint64_t seed, uint8_t* out, size_t n);
GTD_API gtd_status gtd_sample_beta_spec(double p_mean, size_t n, uint64_t seed, gtd_spec** out);

/* ---- comparison tables ------------------------------------------------- */

typedef struct gtd_table1_row {
  double p;
  size_t n;
  double dorfman_prime;
  double sterrett;
  double hierarchical;
  double nested;
  double entropy;
} gtd_table1_row;

typedef struct gtd_table2_row {
  double p;
  size_t n;
  size_t draws;
  double dorfman;
  double dorfman_prime;
  double sterrett;
  double hierarchical;
  double nested;
  double entropy;
} gtd_table2_row;

/* Both grid functions return the grid length and copy up to cap values. */
GTD_API size_t gtd_table1_grid(double* out, size_t cap);
GTD_API size_t gtd_table2_grid(double* out, size_t cap);
GTD_API gtd_status gtd_table1_row_compute(double p, size_t n, gtd_table1_row* out);
GTD_API gtd_status gtd_table2_row_compute(double p_mean, size_t n, size_t draws, uint64_t seed,
                                          gtd_table2_row* out);

#ifdef __cplusplus
}
#endif

#endif /* GTD_GTD_H */
