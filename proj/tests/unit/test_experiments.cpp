#include <catch_amalgamated.hpp>

#include "subhc/experiments/experiments.hpp"

using namespace subhc;
using namespace subhc::experiments;

namespace {
const Check& find_check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  throw std::logic_error("unreachable");
}

json small(const std::string& name) {
  if (name == "projection") return {{"runs", 10}, {"length", 120}};
  if (name == "mixing") return {{"horizon", 600}};
  if (name == "criterion_transfer") return {{"instances", 6}, {"example32_horizon", 2000}};
  if (name == "rolewicz") return {{"net_support", 3}, {"horizon", 400}};
  return json::object();
}
}  // namespace

TEST_CASE("check relations and verdict combination") {
  CHECK(relation_holds(1.0, "<=", 1.0));
  CHECK_FALSE(relation_holds(1.0, "<", 1.0));
  CHECK(relation_holds(2.0, ">=", 1.0));
  CHECK(relation_holds(0.0, "==", 0.0));
  CHECK_FALSE(relation_holds(std::nan(""), "<=", 1.0));
  CHECK(combine({}) == CheckVerdict::pass);
  CHECK(combine({make_check("a", 1, "==", 1), make_check("b", 0, "==", 1, "", CheckVerdict::undecided)}) ==
        CheckVerdict::undecided);
  CHECK(combine({make_check("a", 0, "==", 1), make_check("b", 0, "==", 1, "", CheckVerdict::undecided)}) ==
        CheckVerdict::fail);
}

TEST_CASE("rng: fixed stream for a seed") {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    const double x = a.unit();
    CHECK(x == b.unit());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(seed_of(json::object()) == 20240611u);
  CHECK(seed_of(json{{"seed", 9}}) == 9u);
}

TEST_CASE("every experiment passes on its defaults at reduced size") {
  for (const auto& name : experiment_names()) {
    INFO(name);
    const auto r = run_experiment(name, small(name));
    CHECK(r.verdict == CheckVerdict::pass);
    for (const auto& c : r.checks) {
      INFO(c.name);
      CHECK(c.verdict == CheckVerdict::pass);
    }
  }
  CHECK_THROWS_AS(run_experiment("nope", json::object()), ConfigError);
}

TEST_CASE("reports are byte-identical across runs and audit clean") {
  for (const auto& name : experiment_names()) {
    INFO(name);
    const auto a = to_json(run_experiment(name, small(name))).dump(2);
    const auto b = to_json(run_experiment(name, small(name))).dump(2);
    CHECK(a == b);
    const auto audit = audit_experiment(json::parse(a));
    CHECK(audit.consistent);
  }
}

TEST_CASE("audit detects a tampered verdict") {
  json j = to_json(run_experiment("commutant", json::object()));
  j["checks"][0]["observed"] = 1.0;
  const auto a = audit_experiment(j);
  CHECK_FALSE(a.consistent);
  REQUIRE_FALSE(a.mismatches.empty());
  json k = to_json(run_experiment("commutant", json::object()));
  k["verdict"] = "fail";
  CHECK_FALSE(audit_experiment(k).consistent);
}

TEST_CASE("projection: injected violation fails the experiment") {
  json cfg = small("projection");
  cfg["inject_violation"] = true;
  const auto r = run_experiment("projection", cfg);
  CHECK(r.verdict == CheckVerdict::fail);
  CHECK(find_check(r, "law_violations").verdict == CheckVerdict::fail);
}

TEST_CASE("projection: seed changes starts but not the verdict") {
  json a = small("projection"), b = small("projection");
  b["seed"] = 77;
  const auto ra = to_json(run_experiment("projection", a));
  const auto rb = to_json(run_experiment("projection", b));
  CHECK(ra["traces"] != rb["traces"]);
  CHECK(ra["verdict"] == rb["verdict"]);
}

TEST_CASE("mixing: trace values") {
  const auto r = run_experiment("mixing", json{{"horizon", 2000}});
  CHECK(r.verdict == CheckVerdict::pass);
  CHECK(find_check(r, "mixing_n0").observed == 2.0);
  CHECK(find_check(r, "transitive_size").observed == 430.0);
  CHECK(r.traces["transitive"]["members"].front() == 10);
  CHECK(r.traces["transitive"]["members"].back() == 544);
  CHECK(r.traces["direct_sum"]["size"] == 430);
}

TEST_CASE("mixing: a non-mixing first operator leaves the mixing checks undecided") {
  // At horizon 300 the block shift still sits in a contracting block and looks
  // cofinite; by 600 the next expanding block has broken the tail run.
  json cfg = {{"horizon", 600},
              {"mixing_operator",
               {{"type", "shift"}, {"weights", {{"kind", "blocks"}, {"length_rule", "4^k"}, {"values", {0.5, 2}}}}}}};
  const auto r = run_experiment("mixing", cfg);
  CHECK(find_check(r, "mixing_is_cofinite").verdict == CheckVerdict::undecided);
  CHECK(r.verdict != CheckVerdict::pass);
}

TEST_CASE("criterion transfer: bound factor and violated controls") {
  const auto r = run_experiment("criterion_transfer", small("criterion_transfer"));
  CHECK(find_check(r, "bound_factor").observed <= std::sqrt(2.0) + 1e-12);
  CHECK(find_check(r, "split_trace_mismatches").observed == 0.0);
  CHECK(find_check(r, "iterate_overlap").observed == 0.0);
}

TEST_CASE("commutant: per-operator traces") {
  const auto r = run_experiment("commutant", json::object());
  const auto& per = r.traces["commutants"];
  REQUIRE(per.size() == 3);
  CHECK(per[0]["name"] == "T^3");
  CHECK(per[1]["witness_steps_changed"] == 0);
  CHECK(io::to_double(per[1]["max_distance_ratio"]) == 2.0);
  CHECK(per[2]["image_subspace"] == CoordinateSubspace::residues(SpaceKind::bilateral, 2, {1}).describe());
}

TEST_CASE("commutant: non-commuting operator is a config-level precondition failure") {
  json cfg = {{"commutants",
               {{{"name", "W"},
                 {"operator", {{"type", "shift"}, {"weights", {{"kind", "piecewise"}, {"pos", 0.5}, {"neg", 2}}}}}}}}};
  CHECK_THROWS_AS(run_experiment("commutant", cfg), PreconditionError);
}

TEST_CASE("extraction: synthetic dips are found and the extracted data is accepted") {
  const auto r = run_experiment("criterion_extraction", json::object());
  CHECK(r.verdict == CheckVerdict::pass);
  std::vector<Index> expect;
  for (Index k = 0; k < 10; ++k) expect.push_back(16 + 24 * k);
  CHECK(r.traces["iterates"].get<std::vector<Index>>() == expect);
  CHECK(r.traces["criterion"]["verdict"] == "satisfied_to_horizon");
  CHECK(r.traces["condition_i_literal"] == false);
}

TEST_CASE("extraction: horizon 0 and too-short horizons are incomplete") {
  const auto r0 = run_experiment("criterion_extraction", json{{"horizon", 0}});
  CHECK(r0.verdict == CheckVerdict::undecided);
  CHECK(find_check(r0, "deltas_reached").observed == 0.0);
  const auto r1 = run_experiment("criterion_extraction", json{{"horizon", 100}});
  CHECK(r1.verdict == CheckVerdict::undecided);
  CHECK(find_check(r1, "deltas_reached").observed == 4.0);
}

TEST_CASE("extraction: condition (i) failure stops before the search") {
  json cfg = {{"subspace", {{"kind", "half_line"}, {"start", 0}}}};
  const auto r = run_experiment("criterion_extraction", cfg);
  CHECK(r.verdict == CheckVerdict::fail);
  CHECK(find_check(r, "condition_i").verdict == CheckVerdict::fail);
  CHECK_FALSE(r.traces.contains("search"));
}

TEST_CASE("extraction: near misses are logged when invariance fails") {
  // Odd dips land T^n u on x at odd n, where T^n M is not inside M.
  const auto r = run_experiment("criterion_extraction", json{{"dips", {15, 41, 63}}, {"deltas", {0.5, 0.25}}});
  CHECK_FALSE(r.traces["near_misses"].empty());
  for (const auto& m : r.traces["near_misses"]) CHECK(m["n"].get<Index>() % 2 == 1);
}

TEST_CASE("rolewicz: closed-form witness error and contraction checks") {
  const auto r = run_experiment("rolewicz", small("rolewicz"));
  CHECK(r.verdict == CheckVerdict::pass);
  const auto& per = r.traces["per_lambda"];
  CHECK(io::to_double(per[0]["max_witness_error"]) == std::ldexp(1.0, -30) * std::sqrt(3.0));
  const auto bad = run_experiment("rolewicz", json{{"lambdas", {1.5}}, {"witness_n", 2}, {"net_support", 2}});
  CHECK(bad.verdict == CheckVerdict::fail);
}
