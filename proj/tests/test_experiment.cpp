#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "goose/experiment.hpp"

using goose::ConfigError;
using goose::ExperimentConfig;

namespace {

ExperimentConfig parse_str(const std::string& text) {
  std::istringstream in(text);
  return goose::parse_config(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parsing") {
  SUBCASE("empty config misses the experiment key") {
    CHECK_THROWS_AS(parse_str(""), ConfigError);
  }
  SUBCASE("beta = 3 parses to the constant schedule value") {
    const auto cfg = parse_str("experiment = safe-bo-1d\nbeta = 3\n");
    CHECK(cfg.beta == 3.0);
  }
  SUBCASE("comments and blank lines are ignored") {
    const auto cfg = parse_str(
        "# full line comment\n\nexperiment = safe-bo-1d  # trailing\n");
    CHECK(cfg.experiment == "safe-bo-1d");
  }
  SUBCASE("duplicate keys: last wins") {
    const auto cfg =
        parse_str("experiment = safe-bo-1d\nseeds = 3\nseeds = 9\n");
    CHECK(cfg.seeds == 9);
  }
  SUBCASE("unknown keys are rejected with the line number") {
    CHECK_THROWS_WITH_AS(
        parse_str("experiment = safe-bo-1d\nwibble = 1\n"),
        doctest::Contains("line 2"), ConfigError);
  }
  SUBCASE("malformed numbers are rejected with the line number") {
    CHECK_THROWS_WITH_AS(parse_str("experiment = safe-bo-1d\nseeds = ten\n"),
                         doctest::Contains("line 2"), ConfigError);
  }
  SUBCASE("unknown experiment and algorithm names are rejected") {
    CHECK_THROWS_AS(parse_str("experiment = safest-bo\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_str("experiment = safe-bo-1d\nalgorithms = goose,magic\n"),
        ConfigError);
  }
  SUBCASE("path experiments reject bo-only baselines") {
    CHECK_THROWS_AS(
        parse_str("experiment = safe-path-synthetic\nalgorithms = safeopt\n"),
        ConfigError);
  }
  SUBCASE("heightmap experiments require the map path") {
    CHECK_THROWS_AS(parse_str("experiment = safe-path-heightmap\n"),
                    ConfigError);
  }
  SUBCASE("defaults follow the experiment") {
    const auto bo = parse_str("experiment = safe-bo-1d\n");
    CHECK(bo.resolved_lengthscale() == 0.1);
    CHECK(bo.resolved_bo_points() == 200);
    CHECK(bo.resolved_epsilon() == doctest::Approx(0.1));
    CHECK(bo.algorithms ==
          std::vector<std::string>{"goose", "safeopt", "stageopt"});
    const auto bo2 = parse_str("experiment = safe-bo-2d\n");
    CHECK(bo2.resolved_lengthscale() == 0.4);
    CHECK(bo2.resolved_bo_points() == 625);
    const auto path = parse_str("experiment = safe-path-synthetic\n");
    CHECK(path.resolved_lengthscale() == 2.0);
    CHECK(path.resolved_prior_mean() == 0.6);
    CHECK(path.algorithms == std::vector<std::string>{"goose", "smdp"});
  }
  SUBCASE("epsilon default scales with the prior standard deviation") {
    const auto cfg = parse_str("experiment = safe-bo-1d\nvariance = 4\n");
    CHECK(cfg.resolved_epsilon() == doctest::Approx(0.2));
  }
}

TEST_CASE("config round-trips through serialization") {
  const auto cfg = parse_str(
      "experiment = safe-path-synthetic\n"
      "algorithms = goose,smdp\n"
      "seeds = 4\n"
      "budget = 321\n"
      "beta = 2.5\n"
      "epsilon = 0.07\n"
      "kappa = 2\n"
      "grid_w = 9\n"
      "grid_h = 11\n"
      "master_seed = 99\n");
  const std::string once = goose::serialize_config(cfg);
  const ExperimentConfig reparsed = parse_str(once);
  CHECK(goose::serialize_config(reparsed) == once);
  CHECK(reparsed.budget == 321);
  CHECK(reparsed.grid_h == 11);
}

TEST_CASE("emit_csv row shape") {
  goose::MetricsReport report;
  report.experiment = "safe-bo-1d";
  report.bo = true;
  SUBCASE("no runs produces a header-only file") {
    const std::string path = "/tmp/goose_test_empty.csv";
    goose::emit_csv(report, path);
    const std::string text = slurp(path);
    CHECK(text == "algorithm,seed,step,node,kind,value,regret,avg_regret\n");
    std::remove(path.c_str());
  }
  SUBCASE("one row per evaluation step and non-negative regret") {
    for (int seed = 0; seed < 2; ++seed) {
      goose::RunResult run;
      run.algorithm = "goose";
      run.seed = seed;
      for (int s = 0; s < 5; ++s) {
        run.trace.constraint_evals.push_back({s, s, 0.1 * s});
        run.regret.push_back(0.2);
        run.avg_regret.push_back(0.2);
      }
      report.runs.push_back(std::move(run));
    }
    const std::string path = "/tmp/goose_test_rows.csv";
    goose::emit_csv(report, path);
    const std::string text = slurp(path);
    int lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 1 + 2 * 5);  // header + algorithms x seeds x steps
    std::remove(path.c_str());
  }
}

TEST_CASE("small experiment end to end: deterministic and safe") {
  ExperimentConfig cfg = parse_str(
      "experiment = safe-bo-1d\n"
      "algorithms = goose,safeopt\n"
      "seeds = 1\n"
      "budget = 15\n"
      "bo_points = 50\n"
      "master_seed = 5\n");
  cfg.out_dir = "/tmp/goose_exp_a";
  const goose::MetricsReport a = goose::run_experiment(cfg);
  const auto files_a = goose::emit_all_csv(a, cfg);
  cfg.out_dir = "/tmp/goose_exp_b";
  const goose::MetricsReport b = goose::run_experiment(cfg);
  const auto files_b = goose::emit_all_csv(b, cfg);
  CHECK(a.violation_runs == 0);
  REQUIRE(files_a.size() == files_b.size());
  for (size_t i = 0; i < files_a.size(); ++i)
    CHECK(slurp(files_a[i]) == slurp(files_b[i]));
  CHECK(!a.mean_avg_regret.at("goose").empty());
  std::filesystem::remove_all("/tmp/goose_exp_a");
  std::filesystem::remove_all("/tmp/goose_exp_b");
}

}  // TEST_SUITE
