// gtd: command-line front end over the C API.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gtd/gtd.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gtd_status status) {
  if (status != GTD_OK)
    throw CliError(std::string(gtd_status_name(status)) + ": " + gtd_last_error());
}

using SpecPtr = std::unique_ptr<gtd_spec, decltype(&gtd_spec_free)>;
using PartitionPtr = std::unique_ptr<gtd_partition, decltype(&gtd_partition_free)>;
using PolicyPtr = std::unique_ptr<gtd_policy, decltype(&gtd_policy_free)>;

struct RunConfig {
  std::optional<double> p;
  std::optional<std::size_t> n;
  std::string probs_file;
  std::string proc = "d";
  std::string policy_class = "nested";
  std::string policy_file;
  std::string emit_policy;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string output;
  std::int64_t k = 0;
  std::int64_t k_max = 0;
  std::size_t runs = 10000;
  std::size_t reps = 1000;
  std::size_t cap = 16;
  std::vector<double> p_list;
  bool no_presort = false;
  bool huffman = false;
  bool audit = false;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw CliError("cannot write output file '" + cfg.output + "'");
  out << text << '\n';
}

double require_p(const RunConfig& cfg) {
  if (!cfg.p) throw CliError("missing --p");
  return *cfg.p;
}

/// Exactly one of --p/--n or --probs-file.
SpecPtr load_spec(const RunConfig& cfg) {
  const bool homogeneous = cfg.p.has_value() || cfg.n.has_value();
  const bool from_file = !cfg.probs_file.empty();
  if (homogeneous && from_file) throw CliError("give either --p/--n or --probs-file, not both");
  if (!homogeneous && !from_file) throw CliError("missing prevalence input: --p and --n, or --probs-file");
  gtd_spec* raw = nullptr;
  if (from_file) {
    check(gtd_spec_load(cfg.probs_file.c_str(), &raw));
  } else {
    if (!cfg.p || !cfg.n) throw CliError("homogeneous input needs both --p and --n");
    check(gtd_spec_homogeneous(*cfg.p, *cfg.n, &raw));
  }
  return SpecPtr(raw, gtd_spec_free);
}

/// Heterogeneous specs are sorted ascending unless --no-presort.
SpecPtr ordered_spec(const RunConfig& cfg) {
  SpecPtr spec = load_spec(cfg);
  if (gtd_spec_is_homogeneous(spec.get()) || cfg.no_presort) return spec;
  gtd_spec* sorted = nullptr;
  check(gtd_spec_sorted(spec.get(), &sorted));
  return SpecPtr(sorted, gtd_spec_free);
}

gtd_procedure parse_proc(const std::string& name) {
  gtd_procedure proc;
  check(gtd_parse_procedure(name.c_str(), &proc));
  return proc;
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("GTD_SEED")) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw CliError("GTD_SEED is not an unsigned integer");
  }
  throw CliError("no seed: pass --seed or set GTD_SEED");
}

std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

json size_window(const gtd_size_result& r) {
  json w = json::array();
  for (std::size_t i = 0; i < r.window_size; ++i) w.push_back(r.window[i]);
  return w;
}

void run_cost(const RunConfig& cfg) {
  const gtd_procedure proc = parse_proc(cfg.proc);
  double per_person = 0.0;
  check(gtd_cost_per_person(proc, cfg.k, require_p(cfg), &per_person));
  emit(cfg, json{{"proc", cfg.proc}, {"p", *cfg.p}, {"k", cfg.k}, {"per_person", per_person}}.dump());
}

void run_optimal_size(const RunConfig& cfg) {
  const gtd_procedure proc = parse_proc(cfg.proc);
  gtd_size_result r{};
  check(gtd_optimal_size(proc, require_p(cfg), cfg.k_max, &r));
  emit(cfg, json{{"proc", cfg.proc},
                 {"p", *cfg.p},
                 {"k_star", r.k_star},
                 {"per_person", r.per_person},
                 {"k_max", r.k_max},
                 {"window", size_window(r)},
                 {"in_window", r.in_window != 0}}
                .dump());
}

void run_partition(const RunConfig& cfg) {
  const gtd_procedure proc = parse_proc(cfg.proc);
  SpecPtr spec = load_spec(cfg);
  gtd_partition* raw = nullptr;
  check(gtd_partition_optimal(proc, spec.get(), cfg.no_presort ? 0 : 1, &raw));
  PartitionPtr part(raw, gtd_partition_free);

  const bool homogeneous = gtd_spec_is_homogeneous(spec.get()) != 0;
  json groups = json::array();
  std::size_t position = 0;
  for (std::size_t g = 0; g < gtd_partition_group_count(part.get()); ++g) {
    std::size_t size = 0;
    double cost = 0.0;
    check(gtd_partition_group(part.get(), g, &size, &cost));
    json group{{"size", size}, {"cost", cost}};
    if (!homogeneous) {
      json items = json::array();
      for (std::size_t i = 0; i < size; ++i) {
        std::size_t item = 0;
        check(gtd_partition_item(part.get(), position + i, &item));
        items.push_back(item);
      }
      group["items"] = std::move(items);
    }
    position += size;
    groups.push_back(std::move(group));
  }
  const double expected = gtd_partition_expected_tests(part.get());
  const std::size_t n = gtd_partition_size(part.get());
  emit(cfg, json{{"proc", cfg.proc},
                 {"n", n},
                 {"expected_tests", expected},
                 {"per_item", expected / static_cast<double>(n)},
                 {"presorted", gtd_partition_presorted(part.get()) != 0},
                 {"globally_optimal", gtd_partition_globally_optimal(part.get()) != 0},
                 {"groups", std::move(groups)}}
                .dump());
}

PolicyPtr solve_policy(const RunConfig& cfg, gtd_procedure proc) {
  SpecPtr spec = ordered_spec(cfg);
  gtd_policy* raw = nullptr;
  check(gtd_solve(proc, spec.get(), &raw));
  return PolicyPtr(raw, gtd_policy_free);
}

void run_dp(const RunConfig& cfg) {
  const gtd_procedure proc = parse_proc(cfg.policy_class);
  if (proc != GTD_PROC_HIERARCHICAL && proc != GTD_PROC_NESTED)
    throw CliError("--class must be hier or nested");
  PolicyPtr policy = solve_policy(cfg, proc);
  if (!cfg.emit_policy.empty()) check(gtd_policy_save(policy.get(), cfg.emit_policy.c_str()));
  const double expected = gtd_policy_expected_tests(policy.get());
  const std::size_t n = gtd_policy_size(policy.get());
  json out{{"class", cfg.policy_class},
           {"n", n},
           {"expected_tests", expected},
           {"per_item", expected / static_cast<double>(n)},
           {"policy_rules", gtd_policy_rule_count(policy.get())}};
  if (!cfg.emit_policy.empty()) out["policy_path"] = cfg.emit_policy;
  emit(cfg, out.dump());
}

void run_bounds(const RunConfig& cfg) {
  SpecPtr spec = load_spec(cfg);
  double entropy = 0.0;
  check(gtd_entropy(spec.get(), &entropy));
  json out{{"n", gtd_spec_size(spec.get())}, {"entropy", entropy}, {"cap", cfg.cap}};
  if (cfg.huffman) {
    double length = 0.0;
    check(gtd_huffman_bound(spec.get(), cfg.cap, &length));
    out["huffman"] = length;
  }
  emit(cfg, out.dump());
}

json report_json(const std::string& proc, const gtd_sim_report& r) {
  json out{{"proc", proc},
           {"replicates", r.replicates},
           {"mean_tests", r.mean_tests},
           {"standard_error", nullptr},
           {"z_score", nullptr},
           {"analytic_expectation", r.analytic_expectation},
           {"seed", r.seed},
           {"audited", r.audited != 0},
           {"audit_failures", r.audit_failures},
           {"implied_tests", r.implied_tests},
           {"classification_errors", r.classification_errors}};
  if (r.has_standard_error) {
    out["standard_error"] = r.standard_error;
    if (r.standard_error > 0.0)
      out["z_score"] = std::abs(r.mean_tests - r.analytic_expectation) / r.standard_error;
  }
  return out;
}

void run_simulate(const RunConfig& cfg) {
  const std::uint64_t seed = resolve_seed(cfg);
  gtd_sim_report report{};
  std::string proc_name = cfg.proc;

  if (!cfg.policy_file.empty()) {
    if (cfg.p || cfg.n || !cfg.probs_file.empty())
      throw CliError("--policy carries its own population; drop --p/--n/--probs-file");
    gtd_policy* raw = nullptr;
    check(gtd_policy_load(cfg.policy_file.c_str(), &raw));
    PolicyPtr policy(raw, gtd_policy_free);
    proc_name = gtd_procedure_name(gtd_policy_procedure(policy.get()));
    check(gtd_simulate_policy(policy.get(), cfg.runs, seed, cfg.audit, &report));
  } else {
    const gtd_procedure proc = parse_proc(cfg.proc);
    if (proc == GTD_PROC_HIERARCHICAL || proc == GTD_PROC_NESTED) {
      PolicyPtr policy = solve_policy(cfg, proc);
      check(gtd_simulate_policy(policy.get(), cfg.runs, seed, cfg.audit, &report));
    } else {
      SpecPtr spec = load_spec(cfg);
      gtd_partition* raw = nullptr;
      check(gtd_partition_optimal(proc, spec.get(), cfg.no_presort ? 0 : 1, &raw));
      PartitionPtr part(raw, gtd_partition_free);
      check(gtd_simulate_partition(part.get(), cfg.runs, seed, cfg.audit, &report));
    }
  }
  emit(cfg, report_json(proc_name, report).dump());
}

void run_table1(const RunConfig& cfg) {
  const std::size_t n = cfg.n.value_or(100);
  std::vector<double> grid(gtd_table1_grid(nullptr, 0));
  gtd_table1_grid(grid.data(), grid.size());
  if (!cfg.p_list.empty()) grid = cfg.p_list;

  std::ostringstream csv;
  json rows = json::array();
  csv << "p,D',S,R3,R1,H";
  for (double p : grid) {
    gtd_table1_row r{};
    check(gtd_table1_row_compute(p, n, &r));
    csv << '\n'
        << fixed6(r.p) << ',' << fixed6(r.dorfman_prime) << ',' << fixed6(r.sterrett) << ','
        << fixed6(r.hierarchical) << ',' << fixed6(r.nested) << ',' << fixed6(r.entropy);
    rows.push_back({{"p", r.p},
                    {"n", r.n},
                    {"dprime", r.dorfman_prime},
                    {"s", r.sterrett},
                    {"r3", r.hierarchical},
                    {"r1", r.nested},
                    {"entropy", r.entropy}});
  }
  emit(cfg, cfg.format == "json" ? rows.dump() : csv.str());
}

void run_table2(const RunConfig& cfg) {
  const std::uint64_t seed = resolve_seed(cfg);
  const std::size_t n = cfg.n.value_or(100);
  std::vector<double> grid(gtd_table2_grid(nullptr, 0));
  gtd_table2_grid(grid.data(), grid.size());
  if (!cfg.p_list.empty()) grid = cfg.p_list;

  std::ostringstream csv;
  json rows = json::array();
  csv << "p,D',S,HL,ON,entropy,D";
  for (double p : grid) {
    gtd_table2_row r{};
    check(gtd_table2_row_compute(p, n, cfg.reps, seed, &r));
    csv << '\n'
        << fixed6(r.p) << ',' << fixed6(r.dorfman_prime) << ',' << fixed6(r.sterrett) << ','
        << fixed6(r.hierarchical) << ',' << fixed6(r.nested) << ',' << fixed6(r.entropy) << ','
        << fixed6(r.dorfman);
    rows.push_back({{"p", r.p},
                    {"n", r.n},
                    {"draws", r.draws},
                    {"dprime", r.dorfman_prime},
                    {"s", r.sterrett},
                    {"hl", r.hierarchical},
                    {"on", r.nested},
                    {"entropy", r.entropy},
                    {"d", r.dorfman}});
  }
  emit(cfg, cfg.format == "json" ? rows.dump() : csv.str());
}

void add_prevalence(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--p", cfg.p, "Common defect probability");
  sub->add_option("--n", cfg.n, "Population size");
  sub->add_option("--probs-file", cfg.probs_file, "JSON file {\"probs\": [...]}");
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--output,-o", cfg.output, "Write the result to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-testing design toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  const auto procs = CLI::IsMember({"d", "dp", "s"});

  auto* cost = app.add_subcommand("cost", "Per-person expected tests for pools of size k");
  cost->add_option("--proc", cfg.proc)->required()->check(procs);
  cost->add_option("--p", cfg.p)->required();
  cost->add_option("--k", cfg.k)->required();
  add_output(cost, cfg);

  auto* size = app.add_subcommand("optimal-size", "Optimal pool size in an unbounded population");
  size->add_option("--proc", cfg.proc)->required()->check(procs);
  size->add_option("--p", cfg.p)->required();
  size->add_option("--k-max", cfg.k_max, "Largest pool size searched");
  add_output(size, cfg);

  auto* part = app.add_subcommand("partition", "Optimal pool partition of a finite population");
  part->add_option("--proc", cfg.proc)->required()->check(procs);
  add_prevalence(part, cfg);
  part->add_flag("--no-presort", cfg.no_presort, "Keep the input item order");
  add_output(part, cfg);

  auto* dp = app.add_subcommand("dp", "Optimal hierarchical or nested policy");
  dp->add_option("--class", cfg.policy_class)->required()->check(CLI::IsMember({"hier", "nested"}));
  add_prevalence(dp, cfg);
  dp->add_flag("--no-presort", cfg.no_presort, "Keep the input item order");
  dp->add_option("--emit-policy", cfg.emit_policy, "Write the policy as JSON to this path");
  add_output(dp, cfg);

  auto* bounds = app.add_subcommand("bounds", "Entropy and Huffman lower bounds");
  add_prevalence(bounds, cfg);
  bounds->add_flag("--huffman", cfg.huffman, "Also compute the exact Huffman bound");
  bounds->add_option("--cap", cfg.cap, "Largest N accepted for the Huffman bound");
  add_output(bounds, cfg);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo check of an optimal design");
  sim->add_option("--proc", cfg.proc)->check(CLI::IsMember({"d", "dp", "s", "hier", "nested"}));
  add_prevalence(sim, cfg);
  sim->add_option("--policy", cfg.policy_file, "Simulate a policy file written by dp --emit-policy");
  sim->add_option("--runs", cfg.runs, "Replicates")->check(CLI::PositiveNumber);
  sim->add_option("--seed", cfg.seed, "Seed (falls back to GTD_SEED)");
  sim->add_flag("--audit", cfg.audit, "Flag tests whose outcome was already implied");
  sim->add_flag("--no-presort", cfg.no_presort, "Keep the input item order");
  add_output(sim, cfg);

  auto* t1 = app.add_subcommand("table1", "Optimal costs for homogeneous populations");
  t1->add_option("--n", cfg.n, "Population size (default 100)");
  t1->add_option("--p", cfg.p_list, "Prevalences, comma separated (default: the standard grid)")->delimiter(',');
  t1->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  add_output(t1, cfg);

  auto* t2 = app.add_subcommand("table2", "Average optimal costs over Beta-drawn prevalences");
  t2->add_option("--reps", cfg.reps, "Draws per prevalence")->check(CLI::PositiveNumber);
  t2->add_option("--seed", cfg.seed, "Seed (falls back to GTD_SEED)");
  t2->add_option("--n", cfg.n, "Population size (default 100)");
  t2->add_option("--p", cfg.p_list, "Mean prevalences, comma separated (default: the standard grid)")->delimiter(',');
  t2->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  add_output(t2, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  // Tables default to CSV, everything else to JSON.
  if ((t1->parsed() || t2->parsed()) && (t1->count("--format") + t2->count("--format")) == 0)
    cfg.format = "csv";

  try {
    if (cost->parsed()) run_cost(cfg);
    else if (size->parsed()) run_optimal_size(cfg);
    else if (part->parsed()) run_partition(cfg);
    else if (dp->parsed()) run_dp(cfg);
    else if (bounds->parsed()) run_bounds(cfg);
    else if (sim->parsed()) run_simulate(cfg);
    else if (t1->parsed()) run_table1(cfg);
    else if (t2->parsed()) run_table2(cfg);
  } catch (const std::exception& e) {
    std::cerr << "gtd: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
