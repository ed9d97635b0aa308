#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kg/runner.hpp"

using namespace kg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_problem(const ConfigError& e, const std::string& needle) {
  return std::any_of(e.problems().begin(), e.problems().end(),
                     [&](const std::string& p) {
                       return p.find(needle) != std::string::npos;
                     });
}

}  // namespace

TEST_CASE("defaults survive an empty document") {
  const ExperimentConfig cfg = parse_config("");
  CHECK(cfg.d == 1);
  CHECK(cfg.R == 30.0);
  CHECK(cfg.N == 1024);
  CHECK(cfg.theta == 3.0);
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.T == 40.0);
  CHECK(cfg.command == Command::evolve);
  CHECK(cfg.out_dir == ".");
  CHECK_FALSE(cfg.strict);
  // The default nonlinearity is the cubic pure power with gamma = 1.
  const NonlinearitySpec spec = cfg.nonlinearity();
  CHECK(spec.theta() == 3.0);
  CHECK(spec.gamma() == 1.0);
}

TEST_CASE("comments, blank lines and whitespace are tolerated") {
  const ExperimentConfig cfg = parse_config(
      "# leading comment\n"
      "\n"
      "  model.d = 3   # trailing comment\n"
      "  model.R=15\n"
      "model.theta = 2.5\n");
  CHECK(cfg.d == 3);
  CHECK(cfg.R == 15.0);
  CHECK(cfg.theta == 2.5);
}

TEST_CASE("dimension out of range is reported with the valid range") {
  try {
    parse_config("model.d = 9\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    REQUIRE(e.problems().size() == 1);
    CHECK(has_problem(e, "1-6"));
    CHECK(has_problem(e, "model.d"));
  }
}

TEST_CASE("every violation is listed, not just the first") {
  try {
    parse_config(
        "model.d = 0\n"
        "model.N = 4\n"
        "dynamics.dt = -1\n"
        "dynamics.T = 0\n"
        "bogus.key = 1\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() >= 5);
    CHECK(has_problem(e, "model.d"));
    CHECK(has_problem(e, "model.N"));
    CHECK(has_problem(e, "dynamics.dt"));
    CHECK(has_problem(e, "dynamics.T"));
    CHECK(has_problem(e, "bogus.key"));
  }
}

TEST_CASE("unknown keys and malformed lines are rejected") {
  CHECK_THROWS_AS(parse_config("model.unknown = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign here\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.N = twelve\n"), ConfigError);
}

TEST_CASE("nonlinearity terms parse from coeff:exponent lists") {
  const ExperimentConfig cfg = parse_config(
      "model.attract = 1.0:5, 0.25:3\n"
      "model.repel = 0.5:2\n"
      "model.gamma = 0.75\n");
  REQUIRE(cfg.attract.size() == 2);
  CHECK(cfg.attract[0].coeff == 1.0);
  CHECK(cfg.attract[0].exponent == 5.0);
  CHECK(cfg.attract[1].coeff == 0.25);
  REQUIRE(cfg.repel.size() == 1);
  CHECK(cfg.repel[0].exponent == 2.0);
  const NonlinearitySpec spec = cfg.nonlinearity();
  CHECK(spec.gamma() == 0.75);
  CHECK_THROWS_AS(parse_config("model.attract = 1.0;3\n"), ConfigError);
}

TEST_CASE("invalid nonlinearity combinations are caught at parse time") {
  // Repulsive exponent above the attractive one.
  CHECK_THROWS_AS(parse_config("model.attract = 1:2\nmodel.repel = 1:4\n"),
                  ConfigError);
  // Supercritical power in d = 3.
  CHECK_THROWS_AS(parse_config("model.d = 3\nmodel.theta = 6\n"), ConfigError);
}

TEST_CASE("sweep requires an amplitude grid") {
  CHECK_THROWS_AS(parse_config("command = sweep\n"), ConfigError);
  const ExperimentConfig cfg =
      parse_config("command = sweep\nsweep.scales = 0.5, 1.0, 2.0\n");
  REQUIRE(cfg.sweep_scales.size() == 3);
  CHECK(cfg.sweep_scales[1] == 1.0);
}

TEST_CASE("gapcheck parameter constraints") {
  CHECK_THROWS_AS(
      parse_config("command = gapcheck\ngap.beta1 = 0.1\ngap.beta2 = 0.5\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config("command = gapcheck\ngap.C1 = 0.5\n"),
                  ConfigError);
  CHECK_NOTHROW(parse_config(
      "command = gapcheck\ngap.beta1 = 2\ngap.beta2 = 0.5\ngap.lipR = 0.1\n"));
}

TEST_CASE("config hash is deterministic and sensitive") {
  const ExperimentConfig a = parse_config("model.N = 512\n");
  const ExperimentConfig b = parse_config("model.N = 512\n");
  const ExperimentConfig c = parse_config("model.N = 256\n");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
  // Key order in the input does not matter: serialization is canonical.
  const ExperimentConfig d1 = parse_config("model.N = 512\nmodel.d = 2\n");
  const ExperimentConfig d2 = parse_config("model.d = 2\nmodel.N = 512\n");
  CHECK(canonical_serialization(d1) == canonical_serialization(d2));
}

TEST_CASE("gapcheck runner writes the certificate file") {
  const fs::path dir = fs::temp_directory_path() / "kg_test_gapcheck";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(
      "command = gapcheck\n"
      "gap.C1 = 1\ngap.C2 = 1\ngap.beta1 = 2\ngap.beta2 = 0.5\n"
      "gap.lipR = 0\n");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == exit_ok);
  const std::string text = slurp(dir / "run_gapcheck.txt");
  CHECK(text.find("holds 1") != std::string::npos);
  CHECK(text.find("condition_value 0") != std::string::npos);
  // lipR = 0 pins the roots to the endpoints exactly.
  CHECK(text.find("gamma1 2") != std::string::npos);
  CHECK(text.find("gamma2 0.5") != std::string::npos);
  CHECK(text.find("config_hash " + config_hash(cfg)) != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("evolve runner writes the scalar series with the hash column") {
  const fs::path dir = fs::temp_directory_path() / "kg_test_evolve";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(
      "command = evolve\n"
      "model.d = 1\nmodel.R = 20\nmodel.N = 64\n"
      "dynamics.dt = 0.01\ndynamics.T = 0.5\ndynamics.max_ell = 0\n"
      "init.zero = true\n");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == exit_ok);
  std::ifstream in(dir / "run_series.csv");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "t,E,K0,h1_sq,l2v_sq,ydot,linf_u,config_hash");
  int rows = 0;
  std::string line;
  const std::string hash = config_hash(cfg);
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 16) == hash);
  }
  CHECK(rows == 51);
  fs::remove_all(dir);
}

TEST_CASE("classify runner emits a verdict record") {
  const fs::path dir = fs::temp_directory_path() / "kg_test_classify";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(
      "command = classify\n"
      "model.d = 1\nmodel.R = 20\nmodel.N = 64\n"
      "dynamics.alpha = 0.5\ndynamics.dt = 0.01\ndynamics.T = 20\n"
      "dynamics.max_ell = 0\n"
      "init.scale = 0.01\ninit.ell = 0\n");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == exit_ok);
  const std::string text = slurp(dir / "run_verdicts.ndjson");
  CHECK(text.find("\"schema\":\"verdict/1\"") != std::string::npos);
  CHECK(text.find("\"kind\":\"CONVERGED\"") != std::string::npos);
  CHECK(text.find(config_hash(cfg)) != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("strict mode turns an undecided verdict into a nonzero exit") {
  const fs::path dir = fs::temp_directory_path() / "kg_test_strict";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(
      "command = classify\n"
      "model.d = 1\nmodel.R = 20\nmodel.N = 64\n"
      "dynamics.alpha = 0.05\ndynamics.dt = 0.01\ndynamics.T = 2\n"
      "dynamics.max_ell = 0\n"
      "init.scale = 0.8\ninit.ell = 0\n");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == exit_ok);  // same run is fine without strict
  cfg.strict = true;
  CHECK(run(cfg, log) == exit_strict_undecided);
  fs::remove_all(dir);
}

TEST_CASE("sweep runner classifies every amplitude in order") {
  const fs::path dir = fs::temp_directory_path() / "kg_test_sweep";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(
      "command = sweep\n"
      "model.d = 1\nmodel.R = 20\nmodel.N = 64\n"
      "dynamics.alpha = 0.5\ndynamics.dt = 0.01\ndynamics.T = 20\n"
      "dynamics.max_ell = 0\n"
      "init.ell = 0\n"
      "sweep.scales = 0.01, 0.02\n"
      "threads = 2\n");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == exit_ok);
  std::ifstream in(dir / "run_verdicts.ndjson");
  std::string line;
  int job = 0;
  while (std::getline(in, line)) {
    CHECK(line.find("\"job\":" + std::to_string(job)) != std::string::npos);
    CHECK(line.find("\"kind\":\"CONVERGED\"") != std::string::npos);
    ++job;
  }
  CHECK(job == 2);
  fs::remove_all(dir);
}

TEST_CASE("solver faults map to the dedicated exit code") {
  // Requesting an initial profile that the catalog cannot supply is a solver
  // fault, not a config error.
  ExperimentConfig cfg = parse_config(
      "command = classify\n"
      "model.d = 1\nmodel.R = 20\nmodel.N = 64\n"
      "dynamics.T = 1\ndynamics.max_ell = 0\n"
      "init.ell = 2\n");
  cfg.out_dir = (fs::temp_directory_path() / "kg_test_fault").string();
  std::ostringstream log;
  CHECK(run(cfg, log) == exit_solver_fault);
}
