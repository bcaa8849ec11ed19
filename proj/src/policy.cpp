#include "gtd/policy.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gtd {

using nlohmann::json;

std::string_view to_string(PolicyClass cls) {
  return cls == PolicyClass::Hierarchical ? "hier" : "nested";
}

PolicyClass parse_policy_class(std::string_view name) {
  if (name == "hier") return PolicyClass::Hierarchical;
  if (name == "nested") return PolicyClass::Nested;
  throw InvalidArgument("unknown policy class '" + std::string(name) + "'");
}

DecisionPolicy::DecisionPolicy(PolicyClass cls, PrevalenceSpec spec, double expected_tests)
    : class_(cls), spec_(std::move(spec)), expected_tests_(expected_tests) {}

PolicyState DecisionPolicy::key(std::size_t start, std::size_t defective, std::size_t binomial) const {
  return PolicyState{spec_.is_homogeneous() ? 0 : start, defective, binomial};
}

void DecisionPolicy::set_rule(const PolicyState& state, std::size_t test_size) {
  rules_[state] = test_size;
}

std::size_t DecisionPolicy::test_size(const PolicyState& state) const {
  const auto it = rules_.find(state);
  if (it == rules_.end()) {
    std::ostringstream msg;
    msg << "policy has no rule for state {start " << state.start << ", defective " << state.defective
        << ", binomial " << state.binomial << "}";
    throw PolicyError(msg.str());
  }
  return it->second;
}

std::string DecisionPolicy::to_json() const {
  json doc;
  doc["class"] = std::string(to_string(class_));
  doc["n"] = spec_.size();
  doc["expected_tests"] = expected_tests_;
  if (spec_.is_homogeneous()) {
    doc["kind"] = "homogeneous";
    doc["p"] = spec_.p();
  } else {
    doc["kind"] = "heterogeneous";
    doc["probs"] = spec_.probs();
  }
  json rules = json::array();
  for (const auto& [state, size] : rules_) {
    json s;
    s["defective_size"] = state.defective;
    s["binomial_size"] = state.binomial;
    if (!spec_.is_homogeneous())
      s["interval"] = {state.start, state.start + state.defective + state.binomial};
    rules.push_back({{"state", s}, {"test_size", size}});
  }
  doc["rules"] = std::move(rules);
  return doc.dump();
}

DecisionPolicy DecisionPolicy::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const PolicyClass cls = parse_policy_class(doc.at("class").get<std::string>());
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind != "homogeneous" && kind != "heterogeneous")
      throw PolicyError("policy kind must be homogeneous or heterogeneous");
    const auto n = doc.at("n").get<std::size_t>();
    PrevalenceSpec spec = kind == "homogeneous"
                              ? PrevalenceSpec::homogeneous(doc.at("p").get<double>(), n)
                              : PrevalenceSpec::heterogeneous(doc.at("probs").get<std::vector<double>>());
    if (spec.size() != n) throw PolicyError("policy probs length does not match n");

    DecisionPolicy policy(cls, std::move(spec), doc.at("expected_tests").get<double>());
    for (const auto& rule : doc.at("rules")) {
      const auto& s = rule.at("state");
      const auto m = s.at("defective_size").get<std::size_t>();
      const auto b = s.at("binomial_size").get<std::size_t>();
      std::size_t start = 0;
      if (s.contains("interval")) {
        const auto iv = s.at("interval").get<std::vector<std::size_t>>();
        if (iv.size() != 2 || iv[1] < iv[0] || iv[1] - iv[0] != m + b || iv[1] > n)
          throw PolicyError("policy state interval is inconsistent with its set sizes");
        start = iv[0];
      } else if (kind == "heterogeneous") {
        throw PolicyError("heterogeneous policy state lacks an interval");
      }
      const auto x = rule.at("test_size").get<std::size_t>();
      const std::size_t pool_from = m > 0 ? m : b;
      if (m == 1 || x < 1 || x > pool_from || (m > 1 && x >= m))
        throw PolicyError("policy rule test_size is infeasible for its state");
      policy.set_rule(policy.key(start, m, b), x);
    }
    return policy;
  } catch (const json::exception& e) {
    throw PolicyError(std::string("malformed policy JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw PolicyError(std::string("policy spec rejected: ") + e.what());
  }
}

void DecisionPolicy::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw PolicyError("cannot write policy file '" + path + "'");
  out << to_json() << '\n';
}

DecisionPolicy DecisionPolicy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PolicyError("cannot read policy file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace gtd
