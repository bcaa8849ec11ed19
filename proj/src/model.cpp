#include "gtd/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace gtd {

namespace {

void check_probability(double p) {
  if (!std::isfinite(p)) throw InvalidArgument("probability is not finite");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("probability out of open interval (0,1)");
}

}  // namespace

std::string_view to_string(Procedure proc) {
  switch (proc) {
    case Procedure::Dorfman: return "d";
    case Procedure::DorfmanPrime: return "dp";
    case Procedure::Sterrett: return "s";
    case Procedure::Hierarchical: return "hier";
    case Procedure::Nested: return "nested";
  }
  return "?";
}

Procedure parse_procedure(std::string_view name) {
  if (name == "d") return Procedure::Dorfman;
  if (name == "dp") return Procedure::DorfmanPrime;
  if (name == "s") return Procedure::Sterrett;
  if (name == "hier") return Procedure::Hierarchical;
  if (name == "nested") return Procedure::Nested;
  throw InvalidArgument("unknown procedure '" + std::string(name) + "'");
}

PrevalenceSpec PrevalenceSpec::homogeneous(double p, std::size_t n) {
  check_probability(p);
  if (n < 1) throw InvalidArgument("population size must be at least 1");
  PrevalenceSpec spec;
  spec.kind_ = Kind::Homogeneous;
  spec.n_ = n;
  spec.p_ = p;
  return spec;
}

PrevalenceSpec PrevalenceSpec::heterogeneous(std::vector<double> probs) {
  if (probs.empty()) throw InvalidArgument("heterogeneous probability vector is empty");
  for (double p : probs) check_probability(p);

  auto prefix = std::make_shared<std::vector<double>>(probs.size() + 1);
  (*prefix)[0] = 1.0;
  for (std::size_t i = 0; i < probs.size(); ++i) (*prefix)[i + 1] = (*prefix)[i] * (1.0 - probs[i]);

  PrevalenceSpec spec;
  spec.kind_ = Kind::Heterogeneous;
  spec.n_ = probs.size();
  spec.probs_ = std::make_shared<const std::vector<double>>(std::move(probs));
  spec.prefix_ = std::move(prefix);
  return spec;
}

double PrevalenceSpec::p() const {
  if (!is_homogeneous()) throw InvalidArgument("spec is heterogeneous; no common p");
  return p_;
}

double PrevalenceSpec::prob(std::size_t i) const {
  if (i >= n_) throw OutOfRange("item index out of range");
  return is_homogeneous() ? p_ : (*probs_)[i];
}

std::vector<double> PrevalenceSpec::probs() const {
  if (is_homogeneous()) return std::vector<double>(n_, p_);
  return *probs_;
}

double PrevalenceSpec::miss_product(std::size_t begin, std::size_t end) const {
  if (begin > end || end > n_) throw OutOfRange("miss_product range out of bounds");
  if (begin == end) return 1.0;
  if (is_homogeneous()) return std::pow(1.0 - p_, static_cast<double>(end - begin));

  const auto& prefix = *prefix_;
  // Division is exact to a few ulps while the prefix stays normal; once it
  // drops into the subnormal range, multiply the interval out directly.
  if (prefix[end] >= std::numeric_limits<double>::min()) return prefix[end] / prefix[begin];
  double product = 1.0;
  for (std::size_t i = begin; i < end; ++i) product *= 1.0 - (*probs_)[i];
  return product;
}

PrevalenceSpec PrevalenceSpec::sorted_ascending(std::vector<std::size_t>* order) const {
  std::vector<std::size_t> idx(n_);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> values = probs();
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(n_);
  for (std::size_t i = 0; i < n_; ++i) sorted[i] = values[idx[i]];
  if (order) *order = idx;
  return heterogeneous(std::move(sorted));
}

PrevalenceSpec validate(const PrevalenceSpec& spec) {
  if (spec.size() < 1) throw InvalidArgument("population size must be at least 1");
  if (spec.is_homogeneous()) {
    check_probability(spec.p());
  } else {
    for (std::size_t i = 0; i < spec.size(); ++i) check_probability(spec.prob(i));
  }
  return spec;
}

PrevalenceSpec parse_probs_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("probs file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probs") || !doc["probs"].is_array())
    throw InvalidArgument("probs file must be an object with a \"probs\" array");
  std::vector<double> probs;
  for (const auto& v : doc["probs"]) {
    if (!v.is_number()) throw InvalidArgument("probs entries must be numbers");
    probs.push_back(v.get<double>());
  }
  return PrevalenceSpec::heterogeneous(std::move(probs));
}

PrevalenceSpec load_probs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read probs file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_probs_json(buf.str());
}

std::size_t Partition::total() const {
  return std::accumulate(groups.begin(), groups.end(), std::size_t{0});
}

void Partition::check(std::size_t n) const {
  for (std::size_t g : groups)
    if (g == 0) throw InvalidArgument("partition contains an empty group");
  if (total() != n) throw InvalidArgument("partition sizes do not sum to the population size");
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    correction_ += (sum_ - t) + x;
  else
    correction_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace gtd
