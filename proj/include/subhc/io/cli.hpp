#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "subhc/criteria/example32.hpp"
#include "subhc/criteria/weight_criteria.hpp"
#include "subhc/experiments/experiments.hpp"
#include "subhc/io/config.hpp"
#include "subhc/io/reports.hpp"

namespace subhc::cli {

using json = nlohmann::json;

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_undecided = 2, exit_config = 64 };

/// Parsed command line; overrides are echoed into every report.
struct Invocation {
  std::string subcommand;
  std::string target;  ///< experiment name or audited file
  std::string config_path;
  std::optional<Index> horizon;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out = "reports";
  BackwardConvention convention = BackwardConvention::thm12;
};

inline int exit_for(Verdict v) {
  switch (v) {
    case Verdict::satisfied_to_horizon:
      return exit_pass;
    case Verdict::violated:
      return exit_fail;
    case Verdict::undecided:
      break;
  }
  return exit_undecided;
}

inline int exit_for(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::pass:
      return exit_pass;
    case CheckVerdict::fail:
      return exit_fail;
    case CheckVerdict::undecided:
      break;
  }
  return exit_undecided;
}

/// fail beats undecided beats pass.
inline int worst(int a, int b) {
  auto rank = [](int c) { return c == exit_fail ? 2 : c == exit_undecided ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline json invocation_json(const Invocation& inv) {
  json o = json::object();
  if (inv.horizon) o["horizon"] = *inv.horizon;
  if (inv.tol) o["tol"] = io::num(*inv.tol);
  if (inv.seed) o["seed"] = *inv.seed;
  o["backward_index_convention"] = to_string(inv.convention);
  return {{"subcommand", inv.subcommand}, {"target", inv.target}, {"config", inv.config_path}, {"overrides", o}};
}

inline std::string csv(const ExperimentReport& r) {
  std::ostringstream o;
  o << "name,observed,relation,threshold,verdict\n";
  for (const auto& c : r.checks) {
    o << c.name << ',' << subhc::detail::fmt_double(c.observed) << ',' << c.relation << ','
      << subhc::detail::fmt_double(c.threshold) << ',' << to_string(c.verdict) << "\n";
  }
  return o.str();
}

template <class V>
std::string csv(const TransitivityWitness<V>& w) {
  std::ostringstream o;
  o << "err_near,err_far,invariant_ok,z_in_m\n"
    << subhc::detail::fmt_double(w.err_near) << ',' << subhc::detail::fmt_double(w.err_far) << ','
    << (w.invariant_ok ? "true" : "false") << ',' << (w.z_in_m ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace detail

/// Writes reports under the output directory with fixed file names.
class Emitter {
 public:
  Emitter(const Invocation& inv, std::ostream& log) : inv_(inv), log_(log) {}

  void json_file(const std::string& stem, json body) {
    body["invocation"] = detail::invocation_json(inv_);
    write(stem + ".json", body.dump(2) + "\n");
  }

  void csv_file(const std::string& stem, const std::string& text) { write(stem + ".csv", text); }

  bool csv() const { return inv_.format == "csv"; }

 private:
  void write(const std::string& name, const std::string& text) {
    std::filesystem::create_directories(inv_.out);
    const std::filesystem::path p = std::filesystem::path(inv_.out) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw Error("write failed for '" + p.string() + "'");
    log_ << "wrote " << p.string() << "\n";
  }

  const Invocation& inv_;
  std::ostream& log_;
};

// ---------------------------------------------------------------------------
// Subcommands. Each returns an exit code; configuration problems throw.

inline int run_criterion(const Invocation& inv, const json& cfg, Emitter& out) {
  const std::string mode = config::str_or(cfg, "mode", "forward", "");
  const Index horizon = inv.horizon.value_or(config::int_or(cfg, "horizon", 20, ""));
  const double tol = inv.tol.value_or(config::num_or(cfg, "tol", 1e-6, ""));
  CriterionReport r;
  if (mode == "forward") {
    r = eval_forward_criterion(config::shift(config::req(cfg, "operator", ""), "/operator"),
                               config::subspace(config::req(cfg, "subspace", ""), "/subspace"),
                               config::int_or(cfg, "base", 0, ""),
                               config::iterates(config::req(cfg, "iterates", ""), "/iterates"), horizon, tol,
                               inv.convention);
  } else if (mode == "direct_sum") {
    const json& ops = config::req(cfg, "operators", "");
    const json& subs = config::req(cfg, "subspaces", "");
    const std::vector<Index> bases =
        cfg.contains("bases") ? config::int_list(cfg.at("bases"), "/bases") : std::vector<Index>{0, 0};
    if (bases.size() != 2) throw ConfigError("bases: expected two indices", "/bases");
    r = eval_direct_sum_criterion(config::shift(config::req(ops, "left", "/operators"), "/operators/left"),
                                  config::shift(config::req(ops, "right", "/operators"), "/operators/right"),
                                  config::subspace(config::req(subs, "left", "/subspaces"), "/subspaces/left"),
                                  config::subspace(config::req(subs, "right", "/subspaces"), "/subspaces/right"),
                                  bases[0], bases[1], config::iterates(config::req(cfg, "iterates", ""), "/iterates"),
                                  horizon, tol, inv.convention);
  } else if (mode == "subspace") {
    const OperatorExpr t = config::op(config::req(cfg, "operator", ""), "/operator");
    const CoordinateSubspace m = config::subspace(config::req(cfg, "subspace", ""), "/subspace");
    const auto data = config::criterion_data(cfg, "");
    const Index budget = config::int_or(cfg, "sample_budget", 16, "");
    if (budget < 1) throw ConfigError("sample_budget must be >= 1", "/sample_budget");
    r = check_subspace_criterion<SparseVector>(t, m, data, tol, horizon, static_cast<std::size_t>(budget));
  } else {
    throw ConfigError("unknown criterion mode \"" + mode + "\"", "/mode");
  }
  if (out.csv()) out.csv_file("criterion-" + mode, io::csv(r));
  else out.json_file("criterion-" + mode, io::to_json(r));
  return exit_for(r.verdict);
}

inline OrbitTrace<SparseVector> orbit_from(const Invocation& inv, const json& cfg) {
  const OperatorExpr t = config::op(config::req(cfg, "operator", ""), "/operator");
  const SparseVector x = config::vector(config::req(cfg, "start", ""), "/start");
  const CoordinateSubspace m = cfg.contains("subspace") ? config::subspace(cfg.at("subspace"), "/subspace")
                                                        : CoordinateSubspace::full(x.kind());
  const Index length = inv.horizon.value_or(config::int_or(cfg, "length", 1000, ""));
  if (length < 0) throw ConfigError("length must be >= 0", "/length");
  OrbitOptions opt;
  opt.max_retained = static_cast<std::size_t>(config::int_or(cfg, "max_retained", 4096, ""));
  return compute_orbit(t, x, length, m, opt);
}

inline int run_orbit(const Invocation& inv, const json& cfg, Emitter& out) {
  const auto orbit = orbit_from(inv, cfg);
  if (out.csv()) out.csv_file("orbit", io::csv(orbit.records()));
  else out.json_file("orbit", io::to_json(orbit));
  return exit_pass;
}

inline int run_density(const Invocation& inv, const json& cfg, Emitter& out) {
  const auto orbit = orbit_from(inv, cfg);
  const double eps = config::num_or(cfg, "eps", 0.5, "");
  std::vector<SparseVector> targets;
  std::string desc;
  if (cfg.contains("targets")) {
    const json& ts = cfg.at("targets");
    if (!ts.is_array()) throw ConfigError("targets: expected an array of vectors", "/targets");
    for (std::size_t i = 0; i < ts.size(); ++i) targets.push_back(config::vector(ts[i], "/targets/" + std::to_string(i)));
    desc = "explicit targets";
  } else {
    const json& net = config::req(cfg, "net", "");
    const Index support = config::int_or(net, "support", 2, "/net");
    const std::vector<double> grid = config::num_list(config::req(net, "grid", "/net"), "/net/grid");
    const double cap = config::num_or(net, "radius_cap", 1e300, "/net");
    targets = make_net(orbit.subspace(), static_cast<std::size_t>(support), grid, cap);
    desc = "net support " + std::to_string(support);
  }
  const DensityReport d = density_report(orbit, targets, eps, desc);
  if (out.csv()) out.csv_file("density", io::csv(d));
  else out.json_file("density", io::to_json(d));
  if (cfg.contains("min_coverage")) {
    return d.coverage >= config::num(cfg.at("min_coverage"), "/min_coverage") ? exit_pass : exit_fail;
  }
  return exit_pass;
}

/// Errors within max_error with T^n M ⊆ M pass; a witness outside M is
/// flagged as undecided rather than judged.
inline int run_witness(const Invocation& inv, const json& cfg, Emitter& out) {
  const OperatorExpr t = config::op(config::req(cfg, "operator", ""), "/operator");
  const SparseVector u = config::vector(config::req(cfg, "u", ""), "/u");
  const SparseVector v = config::vector(config::req(cfg, "v", ""), "/v");
  const CoordinateSubspace m = cfg.contains("subspace") ? config::subspace(cfg.at("subspace"), "/subspace")
                                                        : CoordinateSubspace::full(u.kind());
  const Index n = inv.horizon.value_or(config::int_or(cfg, "n", 30, ""));
  const double max_error = inv.tol.value_or(config::num_or(cfg, "max_error", 1e-6, ""));
  const auto w = transitivity_witness<SparseVector>(t, m, u, v, n);
  json body = io::to_json(w);
  body["n"] = n;
  body["max_error"] = io::num(max_error);
  if (out.csv()) out.csv_file("witness", detail::csv(w));
  else out.json_file("witness", body);
  if (!(w.err_near + w.err_far <= max_error) || !w.invariant_ok) return exit_fail;
  return w.z_in_m ? exit_pass : exit_undecided;
}

inline int run_returnset(const Invocation& inv, const json& cfg, Emitter& out) {
  const OperatorExpr t = config::op(config::req(cfg, "operator", ""), "/operator");
  const Index horizon = inv.horizon.value_or(config::int_or(cfg, "horizon", 1000, ""));
  const double tol = inv.tol.value_or(config::num_or(cfg, "tol", 0.0, ""));
  const double ur = config::num(config::req(cfg, "u_radius", ""), "/u_radius");
  const double vr = config::num(config::req(cfg, "v_radius", ""), "/v_radius");
  ReturnCalibration cal;
  cal.cofinite_tail_fraction = config::num_or(cfg, "cofinite_tail_fraction", cal.cofinite_tail_fraction, "");
  cal.infinite_fraction = config::num_or(cfg, "infinite_fraction", cal.infinite_fraction, "");
  ReturnSet r;
  if (config::str_or(cfg, "space", "single", "") == "pair") {
    r = return_set<DirectSumVector>(t, config::pair_subspace(config::req(cfg, "subspace", ""), "/subspace"),
                                    config::pair_vector(config::req(cfg, "u_center", ""), "/u_center"), ur,
                                    config::pair_vector(config::req(cfg, "v_center", ""), "/v_center"), vr, horizon,
                                    tol, cal);
  } else {
    const SparseVector u = config::vector(config::req(cfg, "u_center", ""), "/u_center");
    const CoordinateSubspace m = cfg.contains("subspace") ? config::subspace(cfg.at("subspace"), "/subspace")
                                                          : CoordinateSubspace::full(u.kind());
    r = return_set<SparseVector>(t, m, u, ur, config::vector(config::req(cfg, "v_center", ""), "/v_center"), vr,
                                 horizon, tol, cal);
  }
  if (out.csv()) out.csv_file("returnset", io::csv(r));
  else out.json_file("returnset", io::to_json(r));
  if (cfg.contains("expect")) {
    return config::str(cfg.at("expect"), "/expect") == to_string(r.classification) ? exit_pass : exit_fail;
  }
  return exit_pass;
}

inline int run_example32(const Invocation& inv, const json& cfg, Emitter& out) {
  const Index horizon = inv.horizon.value_or(config::int_or(cfg, "horizon", 10000, ""));
  std::optional<Example32Certificate> built;
  try {
    built = build_example32_weights(horizon);
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return exit_fail;
  }
  const Example32Certificate& c = *built;
  if (out.csv()) {
    out.csv_file("example32-w", io::csv(c.w_report));
    out.csv_file("example32-a", io::csv(c.a_report));
  } else {
    out.json_file("example32", io::to_json(c));
  }
  return exit_pass;
}

/// Experiment configs are either one experiment's own section or an object
/// with an "experiments" map keyed by name; top-level "seed" applies to all.
inline json experiment_section(const Invocation& inv, const json& cfg, const std::string& name) {
  json section = json::object();
  if (cfg.contains("experiments")) {
    const json& all = cfg.at("experiments");
    if (!all.is_object()) throw ConfigError("experiments: expected an object keyed by experiment name", "/experiments");
    if (all.contains(name)) section = all.at(name);
    if (cfg.contains("seed") && !section.contains("seed")) section["seed"] = cfg.at("seed");
  } else if (inv.target != "all") {
    section = cfg;
  }
  if (inv.seed) section["seed"] = *inv.seed;
  if (inv.horizon) section["horizon"] = *inv.horizon;
  if (inv.tol) section["tol"] = io::num(*inv.tol);
  return section;
}

inline int run_experiments(const Invocation& inv, const json& cfg, Emitter& out, std::ostream& log) {
  std::vector<std::string> names;
  if (inv.target == "all") {
    names = experiments::experiment_names();
  } else {
    names.push_back(inv.target);
  }
  int code = exit_pass;
  for (const auto& name : names) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = experiments::run_experiment(name, experiment_section(inv, cfg, name));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << name << ": " << to_string(r.verdict) << " (" << secs << " s)\n";
    if (out.csv()) out.csv_file("experiment-" + name, detail::csv(r));
    else out.json_file("experiment-" + name, to_json(r));
    code = worst(code, exit_for(r.verdict));
  }
  return code;
}

/// Recomputes verdicts from a report file: experiment, criterion or
/// certificate. Exit 0 when every stored verdict is reproduced.
inline int run_audit(const std::string& file, std::ostream& log) {
  const json j = config::parse_text(detail::read_file(file));
  const std::string schema = j.value("schema", "");
  std::vector<std::string> bad;
  auto criterion = [&](const json& c, const std::string& where) {
    const CriterionReport r = io::criterion_from_json(c);
    if (std::string(to_string(r.verdict)) != c.at("verdict").get<std::string>()) bad.push_back(where + "/verdict");
  };
  if (schema == "subhc.experiment/1") {
    bad = audit_experiment(j).mismatches;
  } else if (schema == "subhc.criterion/1") {
    criterion(j, "criterion");
  } else if (schema == "subhc.example32/1") {
    criterion(j.at("w_report"), "w_report");
    criterion(j.at("a_report"), "a_report");
  } else {
    throw ConfigError("audit: unsupported schema \"" + schema + "\"", "/schema", config::line_of(detail::read_file(file), "/schema"));
  }
  for (const auto& m : bad) log << "mismatch: " << m << "\n";
  log << "audit " << (bad.empty() ? "consistent" : "inconsistent") << "\n";
  return bad.empty() ? exit_pass : exit_fail;
}

inline std::string source_name(const Invocation& inv) {
  if (!inv.config_path.empty()) return inv.config_path;
  return inv.subcommand == "audit" ? inv.target : "<command line>";
}

/// Full command line in, exit code out. Diagnostics go to `err`, progress and
/// timings to `log`; report bodies only to files.
inline int dispatch(std::vector<std::string> args, std::ostream& log = std::cerr, std::ostream& err = std::cerr) {
  Invocation inv;
  CLI::App app{"subspace-hypercyclicity toolkit", "subhc"};
  app.require_subcommand(1, 1);
  std::string convention = "thm12";
  std::optional<Index> horizon;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  auto common = [&](CLI::App* s, bool needs_config) {
    auto* c = s->add_option("--config", inv.config_path, "JSON config file");
    if (needs_config) c->required();
    s->add_option("--horizon", horizon, "horizon / length override");
    s->add_option("--tol", tol, "tolerance override");
    s->add_option("--seed", seed, "seed override");
    s->add_option("--format", inv.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", inv.out, "output directory");
    s->add_option("--backward-index-convention", convention, "backward product indexing")
        ->check(CLI::IsMember({"thm12", "thm13"}));
  };
  for (const char* name : {"criterion", "orbit", "density", "witness", "returnset"}) {
    common(app.add_subcommand(name), true);
  }
  auto* exp = app.add_subcommand("experiment", "run a named experiment or all of them");
  exp->add_option("name", inv.target, "experiment name or 'all'")->required();
  common(exp, false);
  common(app.add_subcommand("example32", "build and certify the two-operator counterexample"), false);
  auto* audit = app.add_subcommand("audit", "recompute verdicts from a report file");
  audit->add_option("report", inv.target, "report JSON")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_config;
  }
  inv.subcommand = app.get_subcommands().front()->get_name();
  inv.horizon = horizon;
  inv.tol = tol;
  inv.seed = seed;
  inv.convention = convention == "thm13" ? BackwardConvention::thm13 : BackwardConvention::thm12;

  std::string text;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (inv.subcommand == "audit") return run_audit(inv.target, log);
    json cfg = json::object();
    if (!inv.config_path.empty()) {
      text = detail::read_file(inv.config_path);
      cfg = config::parse_text(text);
      if (!cfg.is_object()) throw ConfigError("top level must be an object", "", 1);
    }
    Emitter out(inv, log);
    int code = exit_pass;
    if (inv.subcommand == "criterion") code = run_criterion(inv, cfg, out);
    else if (inv.subcommand == "orbit") code = run_orbit(inv, cfg, out);
    else if (inv.subcommand == "density") code = run_density(inv, cfg, out);
    else if (inv.subcommand == "witness") code = run_witness(inv, cfg, out);
    else if (inv.subcommand == "returnset") code = run_returnset(inv, cfg, out);
    else if (inv.subcommand == "example32") code = run_example32(inv, cfg, out);
    else code = run_experiments(inv, cfg, out, log);
    log << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return code;
  } catch (const ConfigError& e) {
    const int line = e.line() > 0 ? e.line() : config::line_of(text, e.path());
    const std::string file = source_name(inv);
    err << file << ":" << line << ": config error: " << e.what() << "\n";
    return exit_config;
  } catch (const json::exception& e) {
    err << source_name(inv) << ":0: config error: " << e.what() << "\n";
    return exit_config;
  } catch (const Error& e) {
    // Library preconditions violated by the configured inputs.
    err << source_name(inv) << ":0: config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    err << source_name(inv) << ":0: config error: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace subhc::cli
