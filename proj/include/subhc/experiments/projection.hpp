#pragma once

#include "subhc/experiments/common.hpp"
#include "subhc/orbit/orbit.hpp"

namespace subhc::experiments {

/// Counts (n, target pair) with ‖left‖ or ‖right‖ component distance above
/// the pair distance. dist_*[n][target] per step.
inline std::size_t projection_violations(const std::vector<std::vector<double>>& left,
                                         const std::vector<std::vector<double>>& right,
                                         const std::vector<std::vector<double>>& pair) {
  std::size_t bad = 0;
  const std::size_t nr = right.empty() ? 0 : right.front().size();
  for (std::size_t n = 0; n < pair.size(); ++n) {
    for (std::size_t t = 0; t < pair[n].size(); ++t) {
      const std::size_t a = t / nr, b = t % nr;
      if (left[n][a] > pair[n][t]) ++bad;
      if (right[n][b] > pair[n][t]) ++bad;
    }
  }
  return bad;
}

namespace detail {
template <class V>
std::vector<std::vector<double>> step_distances(const OrbitTrace<V>& o, const std::vector<V>& targets) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(o.length()) + 1);
  o.replay([&](Index, const ScaledVector<V>& s) {
    std::vector<double> row;
    row.reserve(targets.size());
    for (const auto& t : targets) row.push_back(distance_to(s, t));
    out.push_back(std::move(row));
  });
  return out;
}

inline SparseVector random_member(Rng& rng, const CoordinateSubspace& m, std::size_t support, std::size_t pool) {
  const auto idx = m.first_indices(pool);
  SparseVector v(m.kind());
  for (std::size_t j = 0; j < support && !idx.empty(); ++j) v.add(idx[rng.below(idx.size())], rng.uniform(-1.0, 1.0));
  return v;
}
}  // namespace detail

/// Direct-sum orbits against a product net: every component distance must be
/// bounded by the pair distance, and product coverage by component coverage.
inline ExperimentReport run_projection_experiment(const json& cfg) {
  static const json def_op = {{"type", "shift"}, {"weights", {{"kind", "piecewise"}, {"pos", 0.5}, {"neg", 2}}}};
  static const json def_m = {{"kind", "residues"}, {"modulus", 2}, {"residues", {0}}};
  ExperimentReport rep;
  rep.name = "projection";
  rep.config = cfg;
  const OperatorExpr t1 = config::op(section(cfg, "operator_left", def_op), path(cfg, "operator_left"));
  const OperatorExpr t2 = config::op(section(cfg, "operator_right", def_op), path(cfg, "operator_right"));
  const CoordinateSubspace m1 = config::subspace(section(cfg, "subspace_left", def_m), path(cfg, "subspace_left"));
  const CoordinateSubspace m2 = config::subspace(section(cfg, "subspace_right", def_m), path(cfg, "subspace_right"));
  const Index runs = config::int_or(cfg, "runs", 100, "");
  const Index length = config::int_or(cfg, "length", 500, "");
  const Index start_support = config::int_or(cfg, "start_support", 4, "");
  const Index start_pool = config::int_or(cfg, "start_pool", 21, "");
  const Index net_support = config::int_or(cfg, "net_support", 2, "");
  const std::vector<double> grid =
      cfg.contains("net_grid") ? config::num_list(cfg.at("net_grid"), "/net_grid") : std::vector<double>{-1, 0, 1};
  const double eps = config::num_or(cfg, "eps", 0.5, "");
  const bool inject = cfg.contains("inject_violation") && config::boolean(cfg.at("inject_violation"), "/inject_violation");
  if (runs < 0 || length < 0 || start_support < 0 || start_pool < 1 || net_support < 1) {
    throw ConfigError("projection: counts must be nonnegative", "");
  }

  const auto net_l = make_net(m1, static_cast<std::size_t>(net_support), grid, 1e300);
  const auto net_r = make_net(m2, static_cast<std::size_t>(net_support), grid, 1e300);
  std::vector<DirectSumVector> net_pair;
  for (const auto& a : net_l) {
    for (const auto& b : net_r) net_pair.push_back({a, b});
  }
  const OperatorExpr ts = OperatorExpr::direct_sum(t1, t2);
  Rng rng(seed_of(cfg));
  std::size_t violations = 0, coverage_violations = 0, control_violations = 0;
  std::vector<double> cov_l, cov_r, cov_p;
  std::vector<Index> per_run;
  for (Index run = 0; run < runs; ++run) {
    DirectSumVector start{detail::random_member(rng, m1, static_cast<std::size_t>(start_support), static_cast<std::size_t>(start_pool)),
                          detail::random_member(rng, m2, static_cast<std::size_t>(start_support), static_cast<std::size_t>(start_pool))};
    const auto pair_orbit = compute_orbit(ts, start, length, DirectSumSubspace{m1, m2});
    const auto [left_orbit, right_orbit] = project_orbit(pair_orbit);
    const auto dl = detail::step_distances(left_orbit, net_l);
    const auto dr = detail::step_distances(right_orbit, net_r);
    auto dp = detail::step_distances(pair_orbit, net_pair);
    // Negative control: a pair orbit whose distances were halved must be caught.
    auto fake = dp;
    for (auto& row : fake) {
      for (auto& d : row) d *= 0.5;
    }
    control_violations += projection_violations(dl, dr, fake);
    if (inject) dp = fake;
    const std::size_t v = projection_violations(dl, dr, dp);
    violations += v;
    per_run.push_back(static_cast<Index>(v));
    const double cl = density_report(left_orbit, net_l, eps).coverage;
    const double cr = density_report(right_orbit, net_r, eps).coverage;
    double cp = 0.0;
    if (inject) {
      std::size_t covered = 0;
      for (std::size_t t = 0; t < net_pair.size(); ++t) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& row : dp) best = std::min(best, row[t]);
        covered += best <= eps ? 1 : 0;
      }
      cp = static_cast<double>(covered) / static_cast<double>(net_pair.size());
    } else {
      cp = density_report(pair_orbit, net_pair, eps).coverage;
    }
    if (cp > std::min(cl, cr)) ++coverage_violations;
    cov_l.push_back(cl);
    cov_r.push_back(cr);
    cov_p.push_back(cp);
  }
  rep.checks.push_back(make_check("law_violations", static_cast<double>(violations), "==", 0.0,
                                  std::to_string(runs) + " runs, " + std::to_string(net_pair.size()) + " pair targets"));
  rep.checks.push_back(make_check("coverage_law_violations", static_cast<double>(coverage_violations), "==", 0.0));
  rep.checks.push_back(make_check("negative_control_violations", static_cast<double>(control_violations), ">=", 1.0,
                                  "halved pair distances must break the law"));
  rep.traces["violations_per_run"] = as_json(per_run);
  rep.traces["coverage_left"] = as_json(cov_l);
  rep.traces["coverage_right"] = as_json(cov_r);
  rep.traces["coverage_pair"] = as_json(cov_p);
  rep.traces["targets"] = {{"left", net_l.size()}, {"right", net_r.size()}, {"pair", net_pair.size()}};
  rep.finish();
  return rep;
}

}  // namespace subhc::experiments
