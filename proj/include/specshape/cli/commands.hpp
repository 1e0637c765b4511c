#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specshape/analysis/sensing.hpp"
#include "specshape/cli/experiment_spec.hpp"
#include "specshape/sim/report.hpp"

namespace specshape::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBandViolated = 2;

struct CommandOptions {
  std::optional<std::string> out;          // --out overrides spec.output_path
  std::optional<std::uint64_t> seed;       // --seed overrides spec.sim.seed
  std::optional<std::string> formula_mode; // as-printed | rederived | both
  bool trace = false;                      // per-slot dump next to the CSV
  double rel_tol = 0.03;                   // compare: mean relative-difference band
  double min_gain = 0.0;                   // compare: per-row adaptive gain floor
};

// One analytic result row.
struct AnalyzeRow {
  double value = 0.0;
  core::NetworkConfig cfg;
  analysis::FormulaMode fmode = analysis::FormulaMode::Rederived;
  core::PuMode mode = core::PuMode::NetworkCoding;
  core::SuStrategy strategy = core::SuStrategy::Random;
  bool stable = false;
  double service_time = 0.0, max_tput = 0.0, idle_prob = 0.0;
  double p_r = 0.0, sense_cost = 0.0, eta_s = 0.0;
  double pi0 = 0.0, delta = 0.0;  // adaptive only, NaN otherwise
  int iterations = 0;
};

// One pooled simulation row.
struct SimRow {
  double value = 0.0;
  core::NetworkConfig cfg;
  core::SuStrategy strategy = core::SuStrategy::Random;
  std::uint64_t row_seed = 0;
  sim::SimReport rep;
};

// Dataset builders (used by the commands and directly by tests).
std::vector<AnalyzeRow> analyze_rows(const ExperimentSpec& spec);
std::vector<SimRow> simulate_rows(const ExperimentSpec& spec, const CommandOptions& opts);

struct CompareSummary {
  double max_rel_diff_rederived = 0.0;
  double mean_rel_diff_rederived = 0.0;
  double max_rel_diff_as_printed = 0.0;
  double mean_rel_diff_as_printed = 0.0;
  double min_gain = 0.0, max_gain = 0.0;  // simulated adaptive-over-random
  bool has_gain = false;
  int compared_points = 0;
  bool bands_hold = false;
};

// Full commands: write CSV(s), log a short human summary, return exit code.
int cmd_analyze(const ExperimentSpec& spec, const CommandOptions& opts, std::ostream& log);
int cmd_simulate(const ExperimentSpec& spec, const CommandOptions& opts, std::ostream& log);
int cmd_compare(const ExperimentSpec& spec, const CommandOptions& opts, std::ostream& log,
                CompareSummary* summary_out = nullptr);
int cmd_optimal_k(const ExperimentSpec& spec, int k_max, const CommandOptions& opts,
                  std::ostream& log);

struct RlncCheckOptions {
  std::optional<std::string> emit_path;
  std::optional<std::string> verify_path;
  int field_bits = 8;
  int gen_size = 4;
  int payload_len = 8;
  int count = 4;
  long long samples = 40000;
  std::uint64_t seed = 1;
};

int cmd_rlnc_check(const RlncCheckOptions& opts, std::ostream& log);

}  // namespace specshape::cli
