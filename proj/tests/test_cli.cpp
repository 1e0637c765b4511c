#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "specshape/cli/commands.hpp"
#include "specshape/cli/csv.hpp"
#include "specshape/cli/experiment_spec.hpp"

using namespace specshape;
using namespace specshape::cli;
using core::ConfigError;
using nlohmann::json;

namespace {

json base_json() {
  return json{{"num_channels", 3},     {"num_receivers", 20},
              {"batch_size", 5},       {"arrival_rate", 0.35},
              {"erasure_prob", 0.1},   {"minislots_per_slot", 6},
              {"field_size", 65536},   {"backoff", 2},
              {"pu_mode", "network_coding"}, {"su_strategy", "random"}};
}

json spec_json() {
  return json{{"base", base_json()},
              {"sweep", {{"param", "lambda"}, {"values", {0.1, 0.3}}}},
              {"formula_modes", {"rederived", "as_printed"}},
              {"simulate", true},
              {"sim",
               {{"horizon", 4000},
                {"warmup", 400},
                {"trials", 2},
                {"seed", 7},
                {"occupancy", "pu_queues"},
                {"service", "count_receptions"}}}};
}

std::filesystem::path fresh_dir(const char* leaf) {
  const auto dir = std::filesystem::temp_directory_path() / "specshape_cli_tests" / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

TEST_CASE("experiment specs parse strictly") {
  CHECK_NOTHROW(spec_from_json(spec_json()));
  CHECK_THROWS_AS(spec_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(spec_from_json(json{{"sweep", nullptr}}), ConfigError);  // missing base

  auto j = spec_json();
  j["typo"] = 1;
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sweep"]["extra"] = 1;
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sim"]["extra"] = 1;
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["base"]["extra"] = 1;
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sweep"]["values"] = json::array();
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sweep"]["values"] = {0.1, "x"};
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sweep"] = {{"param", "m"}, {"values", {2, 2.5}}};
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);  // fractional batch size

  j = spec_json();
  j["sweep"] = {{"param", "frequency"}, {"values", {1}}};
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["formula_modes"] = {"folklore"};
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["formula_modes"] = json::array();
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["simulate"] = "yes";
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sim"]["occupancy"] = "weather";
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  j = spec_json();
  j["sim"]["service"] = "valet";
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);

  // Sweep values are validated as configs up front.
  j = spec_json();
  j["sweep"]["values"] = {0.1, 1.5};
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);
}

TEST_CASE("a spec without a sweep degenerates to one point") {
  auto j = spec_json();
  j.erase("sweep");
  const auto spec = spec_from_json(j);
  CHECK(spec.sweep_param == SweepParam::Lambda);
  REQUIRE(spec.sweep_values.size() == 1);
  CHECK(spec.sweep_values[0] == 0.35);
  CHECK(spec.simulate);
  CHECK(spec.sim.horizon == 4000);
  CHECK(spec.sim.trials == 2);
  CHECK(spec.sim.seed == 7);
}

TEST_CASE("spec files parse or fail with a clear error") {
  const auto dir = fresh_dir("spec_files");
  const auto good = dir / "good.json";
  std::ofstream(good) << spec_json().dump(2);
  CHECK_NOTHROW(spec_from_file(good.string()));

  CHECK_THROWS_AS(spec_from_file((dir / "missing.json").string()), ConfigError);

  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  try {
    spec_from_file(bad.string());
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].find("JSON parse error") == 0);
  }
}

TEST_CASE("sweep application hits the right field") {
  core::NetworkConfig base;
  CHECK(apply_sweep(base, SweepParam::Lambda, 0.25).arrival_rate == 0.25);
  CHECK(apply_sweep(base, SweepParam::Epsilon, 0.05).erasure_prob == 0.05);
  CHECK(apply_sweep(base, SweepParam::BatchSize, 3).batch_size == 3);
  CHECK(apply_sweep(base, SweepParam::Backoff, 7).backoff == 7);
  CHECK(apply_sweep(base, SweepParam::Channels, 4).num_channels == 4);
  CHECK(apply_sweep(base, SweepParam::Budget, 9).minislots_per_slot == 9);
  CHECK_THROWS_AS(apply_sweep(base, SweepParam::Lambda, 1.5), ConfigError);
  CHECK_THROWS_AS(apply_sweep(base, SweepParam::BatchSize, 2.5), ConfigError);
  CHECK(to_string(SweepParam::BatchSize) == std::string("m"));
  CHECK(sweep_param_from_string("B") == SweepParam::Budget);
}

TEST_CASE("analytic dataset covers modes, strategies and stability") {
  auto j = spec_json();
  j["base"]["su_strategy"] = "adaptive_two_stage";
  j["sweep"]["values"] = {0.1, 0.5};
  const auto spec = spec_from_json(j);
  const auto rows = analyze_rows(spec);
  // 2 values x {nc, arq} x {adaptive, random} x {rederived, as_printed}
  REQUIRE(rows.size() == 16);

  int unstable = 0;
  for (const auto& r : rows) {
    if (!r.stable) {
      ++unstable;
      CHECK(std::isnan(r.eta_s));
      CHECK(std::isnan(r.idle_prob));
      // Per-packet service at lambda 0.5 exceeds the service rate.
      CHECK(r.mode == core::PuMode::Arq);
      CHECK(r.value == 0.5);
      continue;
    }
    CHECK(r.p_r > 0.0);
    CHECK(r.p_r <= 1.0);
    CHECK(r.eta_s > 0.0);
    if (r.strategy == core::SuStrategy::AdaptiveTwoStage) {
      CHECK(std::isfinite(r.pi0));
      CHECK(std::isfinite(r.delta));
      CHECK(r.iterations >= 1);
    } else {
      CHECK(std::isnan(r.pi0));
      CHECK(r.iterations == 0);
    }
  }
  CHECK(unstable == 4);  // arq @ 0.5: 2 strategies x 2 modes

  // The two-stage scan with the same marginal idle probability lands on the
  // same first-idle expectation as the memoryless baseline.
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& a = rows[i];
    if (a.strategy != core::SuStrategy::AdaptiveTwoStage || !a.stable) continue;
    if (a.fmode != analysis::FormulaMode::Rederived) continue;
    for (const auto& b : rows) {
      if (b.strategy == core::SuStrategy::Random && b.stable && b.value == a.value &&
          b.mode == a.mode && b.fmode == analysis::FormulaMode::Rederived)
        CHECK(a.eta_s == doctest::Approx(b.eta_s).epsilon(1e-12));
    }
  }

  // Single-channel tracking is analyzed through the memoryless baseline.
  j = spec_json();
  j["base"]["num_channels"] = 1;
  j["base"]["su_strategy"] = "single_channel_tracking";
  j["sweep"]["values"] = {0.2};
  const auto rows1 = analyze_rows(spec_from_json(j));
  REQUIRE(rows1.size() == 4);  // 1 value x 2 modes x 1 strategy x 2 fmodes
  for (const auto& r : rows1) CHECK(r.strategy == core::SuStrategy::Random);
}

TEST_CASE("simulated dataset derives one seed per sweep point") {
  auto j = spec_json();
  j["base"]["su_strategy"] = "adaptive_two_stage";
  const auto spec = spec_from_json(j);
  CommandOptions opts;
  const auto rows = simulate_rows(spec, opts);
  REQUIRE(rows.size() == 4);  // 2 values x {adaptive, random}

  CHECK(rows[0].strategy == core::SuStrategy::AdaptiveTwoStage);
  CHECK(rows[1].strategy == core::SuStrategy::Random);
  CHECK(rows[0].value == 0.1);
  CHECK(rows[2].value == 0.3);
  CHECK(rows[0].row_seed == rows[1].row_seed);     // same sweep point
  CHECK(rows[0].row_seed != rows[2].row_seed);     // new point, new seed
  CHECK(rows[0].cfg.arrival_rate == 0.1);
  CHECK(rows[2].cfg.arrival_rate == 0.3);
  for (const auto& r : rows) {
    CHECK(r.rep.trials == 2);
    CHECK(r.rep.slots_observed == 2 * 3600);
    CHECK(r.rep.queue_stable);
  }

  // Identical call, identical numbers.
  const auto again = simulate_rows(spec, opts);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].rep.su_throughput.mean == again[i].rep.su_throughput.mean);
    CHECK(rows[i].rep.pu_idle_prob.mean == again[i].rep.pu_idle_prob.mean);
  }

  // A --seed override reshuffles every row seed.
  opts.seed = 99;
  const auto shifted = simulate_rows(spec, opts);
  CHECK(shifted[0].row_seed != rows[0].row_seed);
}

TEST_CASE("analyze command writes the documented table") {
  const auto dir = fresh_dir("analyze");
  const auto out_path = dir / "a.csv";
  CommandOptions opts;
  opts.out = out_path.string();
  std::ostringstream log;
  const auto spec = spec_from_json(spec_json());
  CHECK(cmd_analyze(spec, opts, log) == kExitOk);
  CHECK(log.str().find("analyze:") != std::string::npos);

  const auto lines = read_lines(out_path);
  REQUIRE(lines.size() == 1 + 2 * 2 * 1 * 2);  // header + rows (random base strategy)
  CHECK(lines[0] ==
        "param,value,pu_mode,su_strategy,formula_mode,N,L,m,lambda,epsilon,B,k,q,stable,"
        "service_time,eta_p,idle_prob,p_r,sense_cost,eta_s,pi0,delta,iterations");
  const auto cells = split_csv(lines[1]);
  REQUIRE(cells.size() == 23);
  CHECK(cells[0] == "lambda");
  CHECK(cells[1] == "0.1");
  CHECK(cells[2] == "network_coding");
  CHECK(cells[3] == "random");
  CHECK(cells[4] == "rederived");
  CHECK(cells[5] == "3");
  // Random rows leave the fixed-point columns empty.
  CHECK(cells[20] == "");
  CHECK(cells[21] == "");
}

TEST_CASE("formula-mode override narrows the analyze output") {
  const auto dir = fresh_dir("analyze_mode");
  const auto out_path = dir / "a.csv";
  CommandOptions opts;
  opts.out = out_path.string();
  opts.formula_mode = "rederived";
  std::ostringstream log;
  CHECK(cmd_analyze(spec_from_json(spec_json()), opts, log) == kExitOk);
  const auto lines = read_lines(out_path);
  REQUIRE(lines.size() == 1 + 2 * 2 * 1 * 1);
  for (size_t i = 1; i < lines.size(); ++i)
    CHECK(split_csv(lines[i])[4] == "rederived");

  opts.formula_mode = "sideways";
  CHECK_THROWS_AS(cmd_analyze(spec_from_json(spec_json()), opts, log), ConfigError);
}

TEST_CASE("simulate command writes pooled rows and an optional trace") {
  const auto dir = fresh_dir("simulate");
  const auto out_path = dir / "s.csv";
  auto j = spec_json();
  j["sim"]["horizon"] = 200;
  j["sim"]["warmup"] = 50;
  CommandOptions opts;
  opts.out = out_path.string();
  opts.trace = true;
  std::ostringstream log;
  CHECK(cmd_simulate(spec_from_json(j), opts, log) == kExitOk);

  const auto lines = read_lines(out_path);
  REQUIRE(lines.size() == 1 + 2);  // random base strategy, 2 sweep points
  CHECK(lines[0] ==
        "param,value,trial,slots,mode,strategy,N,L,m,lambda,epsilon,B,k,seed,pu_idle_hat,"
        "pu_tput_hat,p_r_hat,sense_cost_hat,eta_s_hat,pi0_hat,stderr_eta_s,queue_stable");
  const auto cells = split_csv(lines[1]);
  REQUIRE(cells.size() == 22);
  CHECK(cells[2] == "2");    // pooled trials
  CHECK(cells[3] == "300");  // kept slots over both trials
  CHECK(cells[5] == "random");

  // Trace: first sweep point, first trial only, one row per (slot, channel).
  const auto trace_lines = read_lines(out_path.string() + ".trace.csv");
  REQUIRE(trace_lines.size() == 1 + 200 * 3);
  CHECK(trace_lines[0] == "slot,channel,busy,sensed_by_su,su_success,D_t");
  CHECK(split_csv(trace_lines[1]).size() == 6);
}

TEST_CASE("compare command holds its bands on a well-behaved run") {
  const auto dir = fresh_dir("compare_ok");
  const auto out_path = dir / "c.csv";
  auto j = spec_json();
  j["sim"]["horizon"] = 20000;
  j["sim"]["warmup"] = 2000;
  j["sim"]["trials"] = 4;
  CommandOptions opts;
  opts.out = out_path.string();
  std::ostringstream log;
  CompareSummary sum;
  const int rc = cmd_compare(spec_from_json(j), opts, log, &sum);
  CHECK(rc == kExitOk);
  CHECK(sum.bands_hold);
  CHECK(sum.compared_points == 2);
  CHECK(sum.mean_rel_diff_rederived < 0.03);
  CHECK_FALSE(sum.has_gain);  // random-only run has no adaptive rows
  CHECK(log.str().find("bands hold") != std::string::npos);

  const auto lines = read_lines(out_path);
  REQUIRE(lines.size() == 1 + 2);
  CHECK(lines[0] ==
        "param,value,strategy,eta_s_sim,se_eta_s,eta_s_rederived,eta_s_as_printed,"
        "rel_diff_rederived,rel_diff_as_printed,p_r_sim,p_r_rederived,pi0_sim,pi0_analytic,"
        "gain_sim,gain_rederived,gain_as_printed,queue_stable");
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv(lines[i]);
    REQUIRE(cells.size() == 17);
    const double sim_eta = std::stod(cells[3]);
    const double analytic_eta = std::stod(cells[5]);
    CHECK(std::fabs(sim_eta - analytic_eta) / analytic_eta < 0.03);
    CHECK(cells[13] == "");  // no gain column without an adaptive row
  }
}

TEST_CASE("compare command flags a violated gain floor") {
  const auto dir = fresh_dir("compare_violated");
  auto j = spec_json();
  j["base"]["su_strategy"] = "adaptive_two_stage";
  j["sweep"]["values"] = {0.3};
  j["sim"]["horizon"] = 8000;
  j["sim"]["warmup"] = 800;
  CommandOptions opts;
  opts.out = (dir / "c.csv").string();
  opts.min_gain = 0.5;  // far beyond any real gain at this operating point
  std::ostringstream log;
  CompareSummary sum;
  const int rc = cmd_compare(spec_from_json(j), opts, log, &sum);
  CHECK(rc == kExitBandViolated);
  CHECK_FALSE(sum.bands_hold);
  CHECK(sum.has_gain);
  CHECK(sum.min_gain < 0.5);
  CHECK(log.str().find("VIOLATED") != std::string::npos);
}

TEST_CASE("optimal-k command emits the distance curve") {
  const auto dir = fresh_dir("optimal_k");
  auto j = spec_json();
  j["base"]["batch_size"] = 8;
  j["base"]["erasure_prob"] = 0.2;
  j["base"]["arrival_rate"] = 0.4;
  j["base"]["num_receivers"] = 20;
  CommandOptions opts;
  opts.out = (dir / "k.csv").string();
  std::ostringstream log;
  CHECK(cmd_optimal_k(spec_from_json(j), 8, opts, log) == kExitOk);
  CHECK(log.str().find("best k") != std::string::npos);

  const auto lines = read_lines(dir / "k.csv");
  REQUIRE(lines.size() == 1 + 9);
  CHECK(lines[0] == "k,pi0,delta");
  // k = 0 keeps every channel listed.
  const auto first = split_csv(lines[1]);
  CHECK(first[0] == "0");
  CHECK(std::stod(first[1]) == 1.0);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv(lines[i]);
    REQUIRE(cells.size() == 3);
    CHECK(std::stod(cells[1]) > 0.0);
    CHECK(std::stod(cells[1]) <= 1.0);
    CHECK(std::stod(cells[2]) >= 0.0);
  }
}

TEST_CASE("rlnc-check emits, verifies, and self-tests") {
  const auto dir = fresh_dir("rlnc_check");
  const auto vec_path = (dir / "v.txt").string();

  RlncCheckOptions opts;
  opts.emit_path = vec_path;
  std::ostringstream log;
  CHECK(cmd_rlnc_check(opts, log) == kExitOk);

  RlncCheckOptions verify;
  verify.verify_path = vec_path;
  std::ostringstream vlog;
  CHECK(cmd_rlnc_check(verify, vlog) == kExitOk);
  CHECK(vlog.str().find("5/5 vectors verified") != std::string::npos);

  // A corrupted expectation is caught and reported through the exit code.
  RlncCheckOptions broken;
  const auto bad_path = (dir / "bad.txt").string();
  std::ofstream(bad_path) << "vector 1 2 2 rank 2\n"
                             "packet 1 1 | 0 0\n"
                             "packet 1 1 | 0 0\n"
                             "end\n";
  broken.verify_path = bad_path;
  std::ostringstream blog;
  CHECK(cmd_rlnc_check(broken, blog) == kExitBandViolated);
  CHECK(blog.str().find("FAIL") != std::string::npos);

  RlncCheckOptions missing;
  missing.verify_path = (dir / "nope.txt").string();
  std::ostringstream mlog;
  CHECK(cmd_rlnc_check(missing, mlog) == kExitError);

  // No paths: built-in exact + sampled self-test.
  RlncCheckOptions selftest;
  std::ostringstream slog;
  CHECK(cmd_rlnc_check(selftest, slog) == kExitOk);
  CHECK(slog.str().find("expect 0.375 exactly) ok") != std::string::npos);
}

TEST_CASE("csv cells are deterministic and blank out NaN") {
  CHECK(csv_num(std::numeric_limits<double>::quiet_NaN()) == "");
  CHECK(csv_num(1.5) == "1.5");
  CHECK(csv_num(0.1) == "0.1");
  CHECK(csv_num(1.0 / 3.0) == "0.333333333333");
  CHECK(csv_num(42) == "42");
  CHECK(csv_num(7LL) == "7");
  std::ostringstream os;
  csv_row(os, {"a", "", "c"});
  CHECK(os.str() == "a,,c\n");
}
