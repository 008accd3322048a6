#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "subhc/io/json_num.hpp"

namespace subhc {

enum class CheckVerdict { pass, fail, undecided };

inline std::string_view to_string(CheckVerdict v) {
  return v == CheckVerdict::pass ? "pass" : (v == CheckVerdict::fail ? "fail" : "undecided");
}

inline CheckVerdict check_verdict_from(const std::string& s) {
  if (s == "pass") return CheckVerdict::pass;
  if (s == "fail") return CheckVerdict::fail;
  if (s == "undecided") return CheckVerdict::undecided;
  throw std::invalid_argument("unknown check verdict " + s);
}

/// observed <relation> threshold. When the relation does not hold the check
/// takes `otherwise` (fail, or undecided for horizon-limited classifications).
struct Check {
  std::string name;
  double observed = 0.0;
  std::string relation = "<=";
  double threshold = 0.0;
  CheckVerdict otherwise = CheckVerdict::fail;
  CheckVerdict verdict = CheckVerdict::fail;
  std::string note;
};

inline bool relation_holds(double observed, const std::string& relation, double threshold) {
  if (relation == "<=") return observed <= threshold;
  if (relation == "<") return observed < threshold;
  if (relation == ">=") return observed >= threshold;
  if (relation == ">") return observed > threshold;
  if (relation == "==") return observed == threshold;
  throw std::invalid_argument("unknown relation " + relation);
}

inline Check make_check(std::string name, double observed, std::string relation, double threshold,
                        std::string note = {}, CheckVerdict otherwise = CheckVerdict::fail) {
  Check c{std::move(name), observed, std::move(relation), threshold, otherwise, CheckVerdict::pass, std::move(note)};
  c.verdict = relation_holds(c.observed, c.relation, c.threshold) ? CheckVerdict::pass : otherwise;
  return c;
}

inline CheckVerdict combine(const std::vector<Check>& checks) {
  bool undecided = false;
  for (const auto& c : checks) {
    if (c.verdict == CheckVerdict::fail) return CheckVerdict::fail;
    undecided = undecided || c.verdict == CheckVerdict::undecided;
  }
  return undecided ? CheckVerdict::undecided : CheckVerdict::pass;
}

struct ExperimentReport {
  std::string name;
  nlohmann::json config;
  std::vector<Check> checks;
  /// Named traces the checks were computed from.
  nlohmann::json traces = nlohmann::json::object();
  CheckVerdict verdict = CheckVerdict::undecided;
  std::string note;

  void finish() { verdict = combine(checks); }
};

inline nlohmann::json to_json(const Check& c) {
  return {{"name", c.name},          {"observed", io::num(c.observed)},   {"relation", c.relation},
          {"threshold", io::num(c.threshold)}, {"otherwise", to_string(c.otherwise)}, {"verdict", to_string(c.verdict)},
          {"note", c.note}};
}

inline nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"schema", "subhc.experiment/1"}, {"experiment", r.name}, {"config", r.config},
          {"checks", checks},               {"traces", r.traces},   {"verdict", to_string(r.verdict)},
          {"note", r.note}};
}

struct AuditResult {
  bool consistent = true;
  std::vector<std::string> mismatches;
};

/// Recomputes every check verdict and the overall verdict from the serialized
/// observed/threshold values alone.
inline AuditResult audit_experiment(const nlohmann::json& report) {
  AuditResult a;
  std::vector<Check> checks;
  for (const auto& j : report.at("checks")) {
    Check c;
    c.name = j.at("name").get<std::string>();
    c.observed = io::to_double(j.at("observed"));
    c.relation = j.at("relation").get<std::string>();
    c.threshold = io::to_double(j.at("threshold"));
    c.otherwise = check_verdict_from(j.at("otherwise").get<std::string>());
    c.verdict = relation_holds(c.observed, c.relation, c.threshold) ? CheckVerdict::pass : c.otherwise;
    if (std::string(to_string(c.verdict)) != j.at("verdict").get<std::string>()) {
      a.consistent = false;
      a.mismatches.push_back(report.value("experiment", "?") + "/" + c.name);
    }
    checks.push_back(c);
  }
  if (std::string(to_string(combine(checks))) != report.at("verdict").get<std::string>()) {
    a.consistent = false;
    a.mismatches.push_back(report.value("experiment", "?") + "/verdict");
  }
  return a;
}

}  // namespace subhc
