#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "subhc/criteria/example32.hpp"
#include "subhc/io/cli.hpp"

using namespace subhc;
namespace fs = std::filesystem;
using Rational = boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;
using nlohmann::json;

namespace {
constexpr auto B = SpaceKind::bilateral;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string failed_checks(const ExperimentReport& r) {
  std::string s;
  for (const auto& c : r.checks) {
    if (c.verdict != CheckVerdict::pass) s += (s.empty() ? "" : ", ") + c.name;
  }
  return s.empty() ? "all checks pass" : "failing: " + s;
}

double check_value(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c.observed;
  }
  throw std::runtime_error("missing check " + name);
}

double log_exact(const Rational& r) { return static_cast<double>(boost::multiprecision::log(Float50(r))); }

Rational as_rational(double w) {
  return w >= 1.0 ? Rational(static_cast<long long>(w)) : Rational(1, static_cast<long long>(1.0 / w));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome rolewicz() {
  const auto r = experiments::run_experiment("rolewicz", json{{"lambdas", {2, 0.5}}});
  const double err = check_value(r, "lambda=2:max_witness_error");
  const double cov = check_value(r, "lambda=0.5:unit_net_coverage");
  // Largest net vector: all four coordinates equal to ±1.
  const bool closed = err <= std::ldexp(1.0, -30) * 2.0 * (1 + 1e-15);
  std::ostringstream d;
  d << "max error " << err << ", coverage " << cov << ", " << failed_checks(r);
  return {r.verdict == CheckVerdict::pass && err <= 1e-6 && closed && cov < 0.1, d.str()};
}

Outcome evaluator() {
  const WeightedShiftOperator t(WeightSequence::piecewise(0.5, 2.0), B);
  const auto r = eval_forward_criterion(t, CoordinateSubspace::full(B), 0, LinearIterates{1, 0}, 20);
  const auto& row = r.rows.at(19);
  Rational fwd = 1, bwd = 1;
  for (Index j = 0; j < 20; ++j) {
    fwd *= as_rational(t.weights()(j));
    bwd /= as_rational(t.weights()(-1 - j));
  }
  const Rational expect = Rational(1, 1 << 20);
  const bool exact = fwd == expect && bwd == expect && static_cast<double>(expect) == 9.5367431640625e-7;
  const double want = 20 * std::log(0.5);
  std::ostringstream d;
  d.precision(17);
  d << "k=" << row.k << " forward " << row.forward_log << " backward " << row.backward_log << " vs " << want;
  return {row.k == 20 && exact && std::abs(row.forward_log - want) <= 1e-12 && std::abs(row.backward_log - want) <= 1e-12,
          d.str()};
}

Outcome block_pair() {
  const auto c = build_example32_weights(10000);
  double lw = 0, la = 0, bw = 0, ba = 0, fwd = 1e300, bwd = 1e300;
  bool reciprocal = true;
  for (Index n = 1; n <= 10000; ++n) {
    lw += std::log(c.w(n - 1));
    la += std::log(c.a(n - 1));
    bw -= std::log(c.w(-n));
    ba -= std::log(c.a(-n));
    fwd = std::min(fwd, std::max(lw, la));
    bwd = std::min(bwd, std::max(bw, ba));
    reciprocal = reciprocal && c.w(n - 1) * c.a(n - 1) == 1.0;
  }
  const double floor = std::log(0.5) - 1e-9;
  const bool sat = c.w_report.verdict == Verdict::satisfied_to_horizon &&
                   c.a_report.verdict == Verdict::satisfied_to_horizon && c.w_report.rows.size() == 6 &&
                   c.a_report.rows.size() == 6;
  std::ostringstream d;
  d << "components " << to_string(c.w_report.verdict) << "/" << to_string(c.a_report.verdict) << ", scanned floor "
    << std::exp(fwd) << " forward, " << std::exp(bwd) << " backward";
  return {sat && reciprocal && fwd >= floor && bwd >= floor && std::abs(fwd - c.min_forward_max_log) <= 1e-9 &&
              std::abs(bwd - c.min_backward_max_log) <= 1e-9,
          d.str()};
}

Outcome projection() {
  const auto r = experiments::run_experiment("projection", json::object());
  const auto bad = experiments::run_experiment("projection", json{{"inject_violation", true}});
  const std::size_t targets = r.traces["targets"]["pair"].get<std::size_t>();
  std::ostringstream d;
  d << check_value(r, "law_violations") << " violations over " << targets << " pair targets, control "
    << to_string(bad.verdict);
  return {r.verdict == CheckVerdict::pass && targets >= 27 && bad.verdict == CheckVerdict::fail, d.str()};
}

Outcome lifting() {
  const auto r = experiments::run_experiment("criterion_transfer", json{{"instances", 20}, {"tol", 1e-8}});
  std::ostringstream d;
  d.precision(17);
  d << check_value(r, "lifted_accepted") << "/20 lifted, factor " << check_value(r, "bound_factor") << ", "
    << failed_checks(r);
  return {r.verdict == CheckVerdict::pass && check_value(r, "original_accepted") == 20 &&
              check_value(r, "lifted_accepted") == 20 && check_value(r, "split_trace_mismatches") == 0,
          d.str()};
}

Outcome invariance() {
  const std::vector<OperatorExpr> ops = {OperatorExpr::forward(B),
                                         OperatorExpr::shift(WeightSequence::piecewise(0.5, 2.0), B)};
  std::size_t cases = 0, mismatches = 0;
  for (const auto& t : ops) {
    for (Index p = 1; p <= 12; ++p) {
      for (Index mask = 0; mask + 1 < (Index{1} << p); ++mask) {
        std::vector<Index> r;
        for (Index i = 0; i < p; ++i) {
          if (mask >> i & 1) r.push_back(i);
        }
        const auto m = CoordinateSubspace::residues(B, p, r);
        for (Index n = 1; n <= 100; ++n, ++cases) {
          bool oracle = true;
          for (Index x = 0; x < p && oracle; ++x) {
            oracle = !(mask >> x & 1) || (mask >> ((x + n) % p) & 1);
          }
          if ((invariance_check(t, m, n) == Decision::yes) != oracle) ++mismatches;
        }
      }
    }
  }
  std::ostringstream d;
  d << cases << " cases, " << mismatches << " mismatches";
  return {cases >= 10000 && mismatches == 0, d.str()};
}

Outcome mixing() {
  const auto r = experiments::run_experiment("mixing", json{{"horizon", 2000}});
  const auto& mix = r.traces["mixing"];
  const auto tr = r.traces["transitive"]["members"].get<std::vector<Index>>();
  const auto sum = r.traces["direct_sum"]["members"].get<std::vector<Index>>();
  const auto mm = mix["members"].get<std::vector<Index>>();
  const std::set<Index> m1(mm.begin(), mm.end()), s(sum.begin(), sum.end());
  std::size_t missing = 0, both = 0;
  for (Index n : tr) {
    if (!m1.count(n)) continue;
    ++both;
    if (!s.count(n)) ++missing;
  }
  const bool cofinite = mix["classification"] == "cofinite_beyond" && !mix["n0"].is_null() &&
                        mix["n0"].get<Index>() <= 200;
  std::ostringstream d;
  d << "mixing " << mix["classification"].get<std::string>() << " n0=" << mix["n0"] << ", transitive " << tr.size()
    << ", intersection " << both << " with " << missing << " missing from the sum";
  return {cofinite && tr.size() >= 50 && missing == 0 && check_value(r, "sum_contains_intersection") == 0, d.str()};
}

Outcome performance() {
  const auto t = OperatorExpr::shift(WeightSequence::constant(2.0), B);
  const auto t0 = std::chrono::steady_clock::now();
  const auto o = compute_orbit(t, SparseVector::basis(B, 0), 1000000, CoordinateSubspace::residues(B, 2, {0}));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double tail = o.records().back().log_norm;
  const bool orbit_ok = std::abs(tail - 1e6 * std::log(2.0)) <= 1e-9 * 1e6 * std::log(2.0);

  double worst = 0.0;
  for (const auto& w : {WeightSequence::constant(2.0), WeightSequence::piecewise(0.5, 2.0),
                        WeightSequence::blocks(4, {0.5, 2.0}, 0), WeightSequence::blocks(2, {2.0, 0.5, 0.5}, 1)}) {
    if (!std::isfinite(w.log_sum(0, 1000000))) return {false, "non-finite log product at 10^6"};
    Rational p = 1;
    for (Index n = 1; n <= 1000; ++n) {
      p *= as_rational(w(n - 1));
      // |got - log exact| bounds the relative error of the product itself.
      worst = std::max(worst, std::abs(std::expm1(w.log_sum(0, n) - log_exact(p))));
    }
  }
  std::ostringstream d;
  d << "10^6-step orbit in " << secs << " s, worst prefix relative error " << worst;
  return {secs < 1.0 && orbit_ok && worst <= 1e-9, d.str()};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "subhc_acceptance";
  fs::remove_all(root);
  std::ostringstream log;
  const std::string cfg = std::string(SUBHC_SOURCE_DIR) + "/configs/experiments.json";
  for (const char* d : {"a", "b"}) {
    const int code = cli::dispatch({"experiment", "all", "--config", cfg, "--out", (root / d).string()}, log, log);
    if (code != 0) return {false, "suite run exited " + std::to_string(code)};
  }
  std::size_t files = 0, differ = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    ++files;
    if (slurp(e.path()) != slurp(root / "b" / e.path().filename())) ++differ;
  }
  std::size_t other = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(root / "b")) ++other;
  std::ostringstream d;
  d << files << " report files, " << differ << " differ";
  return {files > 0 && files == other && differ == 0, d.str()};
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;  ///< 0 means no runtime bound
  std::function<Outcome()> run;
};
}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "rolewicz dichotomy", 5, rolewicz},
      {2, "weight-product evaluator exactness", 1, evaluator},
      {3, "block-pair construction", 10, block_pair},
      {4, "projection law", 30, projection},
      {5, "criterion lifting", 10, lifting},
      {6, "residue invariance exactness", 5, invariance},
      {7, "mixing/transitive composition", 60, mixing},
      {8, "orbit and product performance", 0, performance},
      {9, "determinism audit", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << o.detail << "; "
              << secs << " s";
    if (c.limit_s > 0) std::cout << " of " << c.limit_s << " s";
    std::cout << ")\n";
  }
  return failures == 0 ? 0 : 1;
}
