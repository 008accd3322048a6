#pragma once

#include "subhc/criteria/example32.hpp"
#include "subhc/criteria/subspace_criterion.hpp"
#include "subhc/experiments/common.hpp"
#include "subhc/io/reports.hpp"

namespace subhc::experiments {

struct CriterionInstance {
  OperatorExpr op;
  CoordinateSubspace subspace;
  CriterionData<SparseVector> data;
  std::string label;
};

/// Seeded instances known to satisfy the criterion: dyadic piecewise shifts on
/// a residue class mod p with iterates 3p·k and inverse-power approximants.
inline std::vector<CriterionInstance> criterion_instances(Rng& rng, std::size_t count) {
  static const double pos[] = {0.5, 0.25};
  static const double neg[] = {2.0, 4.0};
  static const double grid_pool[] = {-1.0, -0.5, 0.5, 1.0, 2.0};
  std::vector<CriterionInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Index p = 2 + static_cast<Index>(rng.below(3));
    const Index r = static_cast<Index>(rng.below(static_cast<std::size_t>(p)));
    const double wp = pos[rng.below(2)];
    const double wn = neg[rng.below(2)];
    std::vector<double> grid{0.0};
    for (double g : grid_pool) {
      if (rng.unit() < 0.5) grid.push_back(g);
    }
    if (grid.size() == 1) grid.push_back(1.0);
    const std::size_t support = 1 + rng.below(2);
    auto m = CoordinateSubspace::residues(SpaceKind::bilateral, p, {r});
    NetDenseSet net{m, support, grid, 4.0};
    out.push_back({OperatorExpr::shift(WeightSequence::piecewise(wp, wn), SpaceKind::bilateral), m,
                   CriterionData<SparseVector>{LinearIterates{3 * p, 0}, net, net, InversePowerApprox{}},
                   "piecewise(" + subhc::detail::fmt_double(wp) + "," + subhc::detail::fmt_double(wn) + ") on " + m.describe()});
  }
  return out;
}

namespace detail {
// max over rows and traces of exp(lifted - original); 1 when both are -inf.
inline double bound_factor(const CriterionReport& orig, const CriterionReport& lifted) {
  double worst = 0.0;
  auto ratio = [](double a, double b) {
    if (std::isinf(a) && a < 0) return std::isinf(b) && b < 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return std::exp(b - a);
  };
  for (std::size_t i = 0; i < orig.rows.size() && i < lifted.rows.size(); ++i) {
    worst = std::max(worst, ratio(orig.rows[i].forward_log, lifted.rows[i].forward_log));
    worst = std::max(worst, ratio(orig.rows[i].backward_log, lifted.rows[i].backward_log));
    worst = std::max(worst, ratio(orig.rows[i].approach_log.value_or(0), lifted.rows[i].approach_log.value_or(0)));
  }
  return worst;
}
}  // namespace detail

/// Criterion data for T is checked, lifted to T ⊕ T on M ⊕ M and checked at
/// √2·tol, then split back and compared trace for trace. Also reproduces the
/// block-shift pair whose components pass individually while the pair fails.
inline ExperimentReport run_criterion_transfer_experiment(const json& cfg) {
  ExperimentReport rep;
  rep.name = "criterion_transfer";
  rep.config = cfg;
  const Index instances = config::int_or(cfg, "instances", 20, "");
  const double tol = config::num_or(cfg, "tol", 1e-8, "");
  const Index horizon = config::int_or(cfg, "horizon", 20, "");
  const Index budget = config::int_or(cfg, "sample_budget", 6, "");
  const Index ex_horizon = config::int_or(cfg, "example32_horizon", 10000, "");
  if (instances < 0 || budget < 1 || horizon < 1) throw ConfigError("criterion_transfer: bad counts", "");
  Rng rng(seed_of(cfg));
  const auto inst = criterion_instances(rng, static_cast<std::size_t>(instances));
  std::size_t accepted = 0, lifted_ok = 0, split_mismatch = 0;
  double worst_factor = 0.0;
  json per = json::array();
  for (const auto& c : inst) {
    const auto b = static_cast<std::size_t>(budget);
    const CriterionReport r = check_subspace_criterion<SparseVector>(c.op, c.subspace, c.data, tol, horizon, b);
    const auto lifted = lift_criterion(c.data);
    const auto ts = OperatorExpr::direct_sum(c.op, c.op);
    const CriterionReport rl = check_subspace_criterion<DirectSumVector>(ts, DirectSumSubspace{c.subspace, c.subspace},
                                                                         lifted, std::sqrt(2.0) * tol, horizon, b);
    const auto [dl, dr] = split_criterion(lifted);
    const CriterionReport sl = check_subspace_criterion<SparseVector>(c.op, c.subspace, dl, tol, horizon, b);
    const CriterionReport sr = check_subspace_criterion<SparseVector>(c.op, c.subspace, dr, tol, horizon, b);
    accepted += r.verdict == Verdict::satisfied_to_horizon ? 1 : 0;
    lifted_ok += rl.verdict == Verdict::satisfied_to_horizon ? 1 : 0;
    split_mismatch += (sl.rows == r.rows ? 0 : 1) + (sr.rows == r.rows ? 0 : 1);
    const double f = detail::bound_factor(r, rl);
    worst_factor = std::max(worst_factor, f);
    per.push_back({{"instance", c.label},
                   {"verdict", to_string(r.verdict)},
                   {"lifted_verdict", to_string(rl.verdict)},
                   {"bound_factor", io::num(f)},
                   {"report", io::to_json(r)}});
  }
  const auto n = static_cast<double>(inst.size());
  rep.checks.push_back(make_check("original_accepted", static_cast<double>(accepted), "==", n));
  rep.checks.push_back(make_check("lifted_accepted", static_cast<double>(lifted_ok), "==", n, "at sqrt(2)*tol"));
  rep.checks.push_back(make_check("bound_factor", worst_factor, "<=", std::sqrt(2.0) + 1e-12));
  rep.checks.push_back(make_check("split_trace_mismatches", static_cast<double>(split_mismatch), "==", 0));

  // Violation transfers: iterates k on the even indices break invariance.
  {
    auto m = CoordinateSubspace::residues(SpaceKind::bilateral, 2, {0});
    auto t = OperatorExpr::shift(WeightSequence::piecewise(0.5, 2.0), SpaceKind::bilateral);
    NetDenseSet net{m, 1, {-1.0, 0.0, 1.0}, 2.0};
    CriterionData<SparseVector> bad{LinearIterates{1, 0}, net, net, InversePowerApprox{}};
    const auto rb = check_subspace_criterion<SparseVector>(t, m, bad, tol, horizon, 4);
    const auto rbl = check_subspace_criterion<DirectSumVector>(OperatorExpr::direct_sum(t, t), DirectSumSubspace{m, m},
                                                               lift_criterion(bad), std::sqrt(2.0) * tol, horizon, 4);
    rep.checks.push_back(make_check("violation_original", rb.verdict == Verdict::violated ? 1 : 0, "==", 1));
    rep.checks.push_back(make_check("violation_lifted", rbl.verdict == Verdict::violated ? 1 : 0, "==", 1));
  }

  // The converse fails: both block shifts pass alone, the pair fails on
  // either side's iterates.
  const Example32Certificate cert = build_example32_weights(ex_horizon);
  const auto half = CoordinateSubspace::half_line(SpaceKind::bilateral, 0);
  const WeightedShiftOperator tw(cert.w, SpaceKind::bilateral), ta(cert.a, SpaceKind::bilateral);
  const auto pw = eval_direct_sum_criterion(tw, ta, half, half, 0, 0, cert.w_iterates, 6, 1e-6);
  const auto pa = eval_direct_sum_criterion(tw, ta, half, half, 0, 0, cert.a_iterates, 6, 1e-6);
  rep.checks.push_back(make_check("components_satisfied",
                                  (cert.w_report.verdict == Verdict::satisfied_to_horizon &&
                                   cert.a_report.verdict == Verdict::satisfied_to_horizon)
                                      ? 1
                                      : 0,
                                  "==", 1));
  rep.checks.push_back(make_check("pair_violated_on_w_iterates", pw.verdict == Verdict::violated ? 1 : 0, "==", 1));
  rep.checks.push_back(make_check("pair_violated_on_a_iterates", pa.verdict == Verdict::violated ? 1 : 0, "==", 1));
  rep.checks.push_back(make_check("floor_forward", cert.min_forward_max_log, ">=", cert.floor_log - 1e-9));
  rep.checks.push_back(make_check("floor_backward", cert.min_backward_max_log, ">=", cert.floor_log - 1e-9));
  const auto overlap = common_subsequence_report(cert.w_iterates, cert.a_iterates, ex_horizon);
  rep.checks.push_back(make_check("iterate_overlap", static_cast<double>(overlap.overlap.size()), "==", 0));

  rep.traces["instances"] = per;
  rep.traces["example32"] = io::to_json(cert);
  rep.traces["pair_on_w_iterates"] = io::to_json(pw);
  rep.traces["pair_on_a_iterates"] = io::to_json(pa);
  rep.finish();
  return rep;
}

}  // namespace subhc::experiments
