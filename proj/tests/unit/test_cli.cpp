#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "subhc/io/cli.hpp"

using namespace subhc;
namespace fs = std::filesystem;

namespace {
const std::string kSrc = SUBHC_SOURCE_DIR;

struct Run {
  int code = -1;
  std::string log;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream log, err;
  Run r;
  r.code = cli::dispatch(std::move(args), log, err);
  r.log = log.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("subhc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string cfg(const std::string& name) { return kSrc + "/configs/" + name; }
}  // namespace

TEST_CASE("criterion on the contracting shift: exit 0 and k·log(1/2) traces") {
  const auto out = fresh_dir("good");
  const auto r = run({"criterion", "--config", cfg("good_shift.json"), "--out", out.string()});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "criterion-forward.json"));
  CHECK(j["verdict"] == "satisfied_to_horizon");
  CHECK(j["schema"] == "subhc.criterion/1");
  for (const auto& row : j["rows"]) {
    const double k = row["k"].get<double>();
    CHECK(io::to_double(row["forward_log"]) == Catch::Approx(k * std::log(0.5)).epsilon(1e-13));
    CHECK(io::to_double(row["backward_log"]) == Catch::Approx(k * std::log(0.5)).epsilon(1e-13));
  }
  CHECK(j["invocation"]["overrides"]["backward_index_convention"] == "thm12");
}

TEST_CASE("sample configs exit with their documented codes") {
  const auto out = fresh_dir("samples");
  const std::vector<std::pair<std::vector<std::string>, int>> cases = {
      {{"criterion", "--config", cfg("direct_sum.json")}, 0},
      {{"criterion", "--config", cfg("block_pair.json")}, 1},
      {{"criterion", "--config", cfg("subspace_criterion.json")}, 0},
      {{"orbit", "--config", cfg("orbit.json")}, 0},
      {{"density", "--config", cfg("density.json")}, 0},
      {{"witness", "--config", cfg("witness_rolewicz.json")}, 0},
      {{"returnset", "--config", cfg("returnset_mixing.json")}, 0},
  };
  for (auto [args, code] : cases) {
    args.push_back("--out");
    args.push_back(out.string());
    INFO(args[0] << " " << args[2]);
    CHECK(run(args).code == code);
  }
}

TEST_CASE("example32 writes a certificate that audits clean") {
  const auto out = fresh_dir("ex32");
  CHECK(run({"example32", "--horizon", "10000", "--out", out.string()}).code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "example32.json"));
  CHECK(io::to_double(j["min_forward_max_log"]) >= std::log(0.5) - 1e-9);
  CHECK(j["horizon"] == 10000);
  CHECK(run({"audit", (out / "example32.json").string()}).code == 0);
  CHECK(run({"example32", "--horizon", "10", "--out", out.string()}).code == 64);
}

TEST_CASE("config errors exit 64 with a line-anchored diagnostic") {
  const auto dir = fresh_dir("bad");
  const auto syntax = write(dir, "syntax.json", "{\n  \"mode\": \"forward\",\n  \"operator\": {\"type\": \"shift\",\n");
  auto r = run({"criterion", "--config", syntax.string(), "--out", dir.string()});
  CHECK(r.code == 64);
  CHECK(r.err.find(syntax.string() + ":4:") == 0);

  const auto field = write(dir, "field.json",
                           "{\n  \"mode\": \"forward\",\n  \"operator\": {\"type\": \"shift\", \"weights\": {\"kind\": "
                           "\"bogus\"}},\n  \"subspace\": {\"kind\": \"full\"},\n  \"iterates\": {\"rule\": \"linear\"}\n}\n");
  r = run({"criterion", "--config", field.string(), "--out", dir.string()});
  CHECK(r.code == 64);
  CHECK(r.err.find(field.string() + ":3:") == 0);
  CHECK(r.err.find("/operator/weights/kind") != std::string::npos);

  const auto pre = write(dir, "pre.json",
                         "{\"operator\": {\"type\": \"shift\", \"weights\": {\"kind\": \"constant\", \"c\": 2}},\n"
                         " \"subspace\": {\"kind\": \"residues\", \"modulus\": 2, \"residues\": [0]},\n"
                         " \"base\": 1, \"iterates\": {\"rule\": \"linear\"}}\n");
  CHECK(run({"criterion", "--config", pre.string(), "--out", dir.string()}).code == 64);
  CHECK(run({"criterion", "--config", (dir / "missing.json").string()}).code == 64);
  CHECK(run({"criterion", "--config", cfg("good_shift.json"), "--bogus"}).code == 64);
  CHECK(run({"criterion"}).code == 64);
  CHECK(run({"criterion", "--config", cfg("good_shift.json"), "--format", "xml"}).code == 64);
  CHECK(run({"criterion", "--config", cfg("good_shift.json"), "--backward-index-convention", "other"}).code == 64);
  CHECK(run({"experiment", "nosuch", "--out", dir.string()}).code == 64);
  CHECK(run({}).code == 64);
  const auto top = write(dir, "array.json", "[1, 2]\n");
  CHECK(run({"orbit", "--config", top.string()}).code == 64);
}

TEST_CASE("csv output: fixed header, header-only for an empty trace") {
  const auto out = fresh_dir("csv");
  auto r = run({"criterion", "--config", cfg("good_shift.json"), "--format", "csv", "--out", out.string()});
  CHECK(r.code == 0);
  const auto text = slurp(out / "criterion-forward.csv");
  CHECK(text.rfind("k,n_k,forward_log,backward_log,invariant\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 41);

  r = run({"criterion", "--config", cfg("good_shift.json"), "--format", "csv", "--horizon", "0", "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(slurp(out / "criterion-forward.csv") == "k,n_k,forward_log,backward_log,invariant\n");

  r = run({"density", "--config", cfg("density.json"), "--format", "csv", "--out", out.string()});
  CHECK(r.code == 0);
  const auto d = slurp(out / "density.csv");
  CHECK(d.rfind("target,best_distance,witness_step,covered\n", 0) == 0);
  // 3^2 net vectors on two indices, all with norm <= sqrt(2) < 1.5.
  CHECK(std::count(d.begin(), d.end(), '\n') == 1 + 9);
}

TEST_CASE("overrides echo into the report and the convention reaches the criterion") {
  const auto out = fresh_dir("echo");
  CHECK(run({"criterion", "--config", cfg("good_shift.json"), "--horizon", "25", "--tol", "1e-3",
             "--backward-index-convention", "thm13", "--out", out.string()})
            .code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "criterion-forward.json"));
  CHECK(j["rows"].size() == 25);
  CHECK(io::to_double(j["tol"]) == 1e-3);
  CHECK(j["note"] == "backward_index_convention=thm13");
  CHECK(j["invocation"]["overrides"]["horizon"] == 25);
  CHECK(j["invocation"]["overrides"]["backward_index_convention"] == "thm13");
}

TEST_CASE("experiment suite: deterministic files and clean audits") {
  const auto a = fresh_dir("suite_a"), b = fresh_dir("suite_b");
  const auto dir = fresh_dir("suite_cfg");
  const auto c = write(dir, "suite.json",
                       R"({"seed": 5, "experiments": {"projection": {"runs": 8, "length": 100},
                          "mixing": {"horizon": 600}, "criterion_transfer": {"instances": 4, "example32_horizon": 1000},
                          "rolewicz": {"net_support": 2, "horizon": 300}}})");
  CHECK(run({"experiment", "all", "--config", c.string(), "--out", a.string()}).code == 0);
  CHECK(run({"experiment", "all", "--config", c.string(), "--out", b.string()}).code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    INFO(e.path().filename());
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    CHECK(run({"audit", e.path().string()}).code == 0);
    const auto text = slurp(e.path());
    CHECK(text.find("elapsed") == std::string::npos);
  }
  CHECK(files == subhc::experiments::experiment_names().size());
  const auto j = nlohmann::json::parse(slurp(a / "experiment-projection.json"));
  CHECK(j["config"]["seed"] == 5);
}

TEST_CASE("audit flags a tampered report") {
  const auto out = fresh_dir("tamper");
  CHECK(run({"experiment", "commutant", "--out", out.string()}).code == 0);
  auto j = nlohmann::json::parse(slurp(out / "experiment-commutant.json"));
  j["checks"][0]["observed"] = 5.0;
  write(out, "bad.json", j.dump(2));
  CHECK(run({"audit", (out / "bad.json").string()}).code == 1);
  CHECK(run({"criterion", "--config", cfg("good_shift.json"), "--out", out.string()}).code == 0);
  auto c = nlohmann::json::parse(slurp(out / "criterion-forward.json"));
  c["rows"].back()["forward_log"] = 3.0;
  write(out, "bad_criterion.json", c.dump(2));
  CHECK(run({"audit", (out / "bad_criterion.json").string()}).code == 1);
  write(out, "other.json", R"({"schema": "nope"})");
  CHECK(run({"audit", (out / "other.json").string()}).code == 64);
}

TEST_CASE("exit code ordering") {
  CHECK(cli::worst(0, 2) == 2);
  CHECK(cli::worst(2, 1) == 1);
  CHECK(cli::worst(1, 0) == 1);
  CHECK(cli::exit_for(Verdict::undecided) == 2);
  CHECK(cli::exit_for(CheckVerdict::fail) == 1);
}
