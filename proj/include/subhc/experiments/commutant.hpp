#pragma once

#include "subhc/experiments/common.hpp"
#include "subhc/io/reports.hpp"
#include "subhc/orbit/witness.hpp"

namespace subhc::experiments {

/// Orbits mapped by operators commuting with T: every cover of the original
/// net must reappear at the same step with distance at most ‖S‖ times larger.
inline ExperimentReport run_commutant_experiment(const json& cfg) {
  static const json def_t = {{"type", "forward"}, {"space", "bilateral"}};
  static const json def_m = {{"kind", "residues"}, {"modulus", 2}, {"residues", {0}}};
  static const json def_x = {{"entries", {{-12, 1}, {-6, 0.5}, {-2, -1}}}};
  static const json def_s = json::array({{{"name", "T^3"}, {"operator", {{"type", "power"}, {"of", def_t}, {"n", 3}}}},
                                         {{"name", "2I"}, {"operator", {{"type", "scalar"}, {"c", 2}, {"of", {{"type", "identity"}}}}}},
                                         {{"name", "F"}, {"operator", {{"type", "forward"}, {"space", "bilateral"}}}}});
  ExperimentReport rep;
  rep.name = "commutant";
  rep.config = cfg;
  const OperatorExpr t = config::op(section(cfg, "operator", def_t), path(cfg, "operator"));
  const CoordinateSubspace m = config::subspace(section(cfg, "subspace", def_m), path(cfg, "subspace"));
  const SparseVector x = config::vector(section(cfg, "start", def_x), path(cfg, "start"));
  const Index length = config::int_or(cfg, "length", 40, "");
  const Index window = config::int_or(cfg, "window", 16, "");
  const double eps = config::num_or(cfg, "eps", 0.5, "");
  const Index net_support = config::int_or(cfg, "net_support", 2, "");
  const std::vector<double> grid =
      cfg.contains("net_grid") ? config::num_list(cfg.at("net_grid"), "/net_grid") : std::vector<double>{-1, -0.5, 0, 0.5, 1};
  const json& specs = section(cfg, "commutants", def_s);
  if (!specs.is_array()) throw ConfigError("commutants: expected an array", "/commutants");

  const auto net = make_net(m, static_cast<std::size_t>(net_support), grid, 1e300);
  const auto orbit = compute_orbit(t, x, length, m);
  const DensityReport base = density_report(orbit, net, eps, "net of M");
  json per = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string p = path(cfg, "commutants") + "/" + std::to_string(i);
    const std::string name = config::str_or(specs[i], "name", "S" + std::to_string(i), p);
    const OperatorExpr s = config::op(config::req(specs[i], "operator", p), p + "/operator");
    const double bound = norm_bound(s);
    const CommutantImage img = map_orbit_by_commutant(s, orbit, net, eps, window);
    std::size_t transport_bad = 0, step_changed = 0;
    double max_ratio = 0.0;
    for (std::size_t k = 0; k < net.size(); ++k) {
      const auto& e = base.entries[k];
      const double mapped = distance_to(img.orbit.vector_at(e.witness_step), img.targets[k]);
      if (mapped > bound * e.best_distance * (1.0 + 1e-12)) ++transport_bad;
      if (img.density.entries[k].witness_step != e.witness_step) ++step_changed;
      if (e.best_distance > 0) max_ratio = std::max(max_ratio, mapped / e.best_distance);
    }
    rep.checks.push_back(make_check(name + ":commutation_residual", img.commutation_residual, "<=", 1e-12));
    rep.checks.push_back(make_check(name + ":transport_residual", img.transport_residual, "<=", 1e-12,
                                    "S applied to retained orbit points vs orbit of Sx"));
    rep.checks.push_back(make_check(name + ":transport_violations", static_cast<double>(transport_bad), "==", 0,
                                    "mapped distance <= ||S|| * original at the original witness step"));
    per.push_back({{"name", name},
                   {"image_subspace", img.image.describe()},
                   {"norm_bound", io::num(bound)},
                   {"coverage", io::num(img.density.coverage)},
                   {"witness_steps_changed", step_changed},
                   {"max_distance_ratio", io::num(max_ratio)}});
  }
  rep.traces["original_coverage"] = io::num(base.coverage);
  rep.traces["original_density"] = io::to_json(base);
  rep.traces["commutants"] = per;
  rep.finish();
  return rep;
}

}  // namespace subhc::experiments
