#pragma once

#include "subhc/experiments/common.hpp"
#include "subhc/io/reports.hpp"
#include "subhc/orbit/witness.hpp"

namespace subhc::experiments {

namespace detail {
// Nonzero net vectors rescaled to norm `radius`, deduplicated.
inline std::vector<SparseVector> sphere_net(const std::vector<SparseVector>& net, double radius) {
  std::vector<SparseVector> out;
  for (const auto& v : net) {
    const double n = norm(v);
    if (n == 0.0) continue;
    std::vector<SparseVector::Entry> e(v.entries().begin(), v.entries().end());
    for (auto& [i, c] : e) c *= radius / n;
    SparseVector s = SparseVector::from_sorted(v.kind(), std::move(e));
    bool dup = false;
    for (const auto& o : out) dup = dup || norm(o - s) <= 1e-12 * radius;
    if (!dup) out.push_back(std::move(s));
  }
  return out;
}
}  // namespace detail

/// λB on ℓ²(ℕ₀): insertion witnesses over every net pair when |λ| > 1, and
/// norm decay with low net coverage when |λ| <= 1.
inline ExperimentReport run_rolewicz_experiment(const json& cfg) {
  ExperimentReport rep;
  rep.name = "rolewicz";
  rep.config = cfg;
  const std::vector<double> lambdas =
      cfg.contains("lambdas") ? config::num_list(cfg.at("lambdas"), "/lambdas") : std::vector<double>{2, 0.5, 1};
  const Index n = config::int_or(cfg, "witness_n", 30, "");
  const Index net_support = config::int_or(cfg, "net_support", 4, "");
  const std::vector<double> grid =
      cfg.contains("net_grid") ? config::num_list(cfg.at("net_grid"), "/net_grid") : std::vector<double>{-1, -0.5, 0, 0.5, 1};
  const Index horizon = config::int_or(cfg, "horizon", 1000, "");
  const double eps = config::num_or(cfg, "eps", 0.5, "");
  const double max_err = config::num_or(cfg, "max_error", 1e-6, "");
  const SparseVector x0 = config::vector(
      section(cfg, "start", json{{"space", "unilateral"}, {"entries", {{0, 0.5}, {1, 0.5}, {2, 0.5}, {3, 0.5}}}}),
      path(cfg, "start"));
  if (n < 0) throw ConfigError("witness_n must be >= 0", "/witness_n");
  if (x0.kind() != SpaceKind::unilateral) throw ConfigError("start must be unilateral", "/start");

  const CoordinateSubspace m = CoordinateSubspace::full(SpaceKind::unilateral);
  const auto net = make_net(m, static_cast<std::size_t>(net_support), grid, 1e300);
  double max_v = 0.0;
  for (const auto& v : net) max_v = std::max(max_v, norm(v));
  json per = json::array();
  for (double lambda : lambdas) {
    const OperatorExpr t = OperatorExpr::rolewicz(lambda);
    const std::string tag = "lambda=" + subhc::detail::fmt_double(lambda);
    json entry = {{"lambda", io::num(lambda)}};
    if (std::abs(lambda) > 1.0) {
      double worst = 0.0;
      std::size_t outside = 0;
      for (const auto& u : net) {
        for (const auto& v : net) {
          const auto w = transitivity_witness<SparseVector>(t, m, u, v, n);
          worst = std::max(worst, w.err_near + w.err_far);
          if (!w.z_in_m) ++outside;
        }
      }
      const double bound = std::pow(std::abs(lambda), -static_cast<double>(n)) * max_v * (1.0 + 1e-15);
      rep.checks.push_back(make_check(tag + ":max_witness_error", worst, "<=", max_err));
      rep.checks.push_back(make_check(tag + ":closed_form_bound", worst, "<=", bound, "|lambda|^-n * max ||v||"));
      entry["pairs"] = net.size() * net.size();
      entry["max_witness_error"] = io::num(worst);
      entry["closed_form_bound"] = io::num(bound);
      entry["witnesses_outside_m"] = outside;
    } else {
      const auto orbit = compute_orbit(t, x0, horizon, m);
      const double log_x = std::log(norm(x0));
      std::size_t bound_bad = 0, increases = 0;
      for (const auto& r : orbit.records()) {
        const double cap = static_cast<double>(r.n) * std::log(std::abs(lambda)) + log_x;
        if (r.log_norm > cap + 1e-12) ++bound_bad;
        if (r.n > 0 && r.log_norm > orbit.records()[static_cast<std::size_t>(r.n) - 1].log_norm + 1e-12) ++increases;
      }
      rep.checks.push_back(make_check(tag + ":norm_bound_violations", static_cast<double>(bound_bad), "==", 0,
                                      "||(lambda B)^n x|| <= |lambda|^n ||x||"));
      entry["final_log_norm"] = io::num(orbit.records().back().log_norm);
      if (std::abs(lambda) < 1.0) {
        const auto targets = detail::sphere_net(net, 1.0);
        const DensityReport d = density_report(orbit, targets, eps, "unit net");
        rep.checks.push_back(make_check(tag + ":unit_net_coverage", d.coverage, "<", 0.1));
        entry["targets"] = targets.size();
        entry["coverage"] = io::num(d.coverage);
      } else {
        const auto targets = detail::sphere_net(net, 2.0);
        const DensityReport d = density_report(orbit, targets, eps, "norm-2 net");
        rep.checks.push_back(make_check(tag + ":norm_increases", static_cast<double>(increases), "==", 0));
        rep.checks.push_back(make_check(tag + ":norm2_net_coverage", d.coverage, "==", 0));
        entry["targets"] = targets.size();
        entry["coverage"] = io::num(d.coverage);
      }
    }
    per.push_back(entry);
  }
  rep.traces["per_lambda"] = per;
  rep.traces["net_size"] = net.size();
  rep.finish();
  return rep;
}

}  // namespace subhc::experiments
