#include "specshape/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "specshape/analysis/adaptive.hpp"
#include "specshape/analysis/backoff.hpp"
#include "specshape/analysis/errors.hpp"
#include "specshape/analysis/pu_profile.hpp"
#include "specshape/cli/csv.hpp"
#include "specshape/rlnc/vectors.hpp"
#include "specshape/sim/experiment.hpp"

namespace specshape::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw core::ConfigError({"cannot open output file '" + path + "'"});
  return out;
}

std::string resolved_output(const ExperimentSpec& spec, const CommandOptions& opts,
                            const char* fallback) {
  if (opts.out) return *opts.out;
  if (!spec.output_path.empty()) return spec.output_path;
  return fallback;
}

std::vector<analysis::FormulaMode> resolved_modes(const ExperimentSpec& spec,
                                                  const CommandOptions& opts) {
  if (!opts.formula_mode) return spec.formula_modes;
  const std::string& s = *opts.formula_mode;
  if (s == "rederived") return {analysis::FormulaMode::Rederived};
  if (s == "as-printed") return {analysis::FormulaMode::AsPrinted};
  if (s == "both")
    return {analysis::FormulaMode::Rederived, analysis::FormulaMode::AsPrinted};
  throw core::ConfigError({"--formula-mode must be as-printed, rederived or both"});
}

const char* fmode_name(analysis::FormulaMode m) {
  return m == analysis::FormulaMode::Rederived ? "rederived" : "as_printed";
}

std::vector<core::SuStrategy> row_strategies(const core::NetworkConfig& cfg) {
  if (cfg.su_strategy == core::SuStrategy::AdaptiveTwoStage)
    return {core::SuStrategy::AdaptiveTwoStage, core::SuStrategy::Random};
  return {cfg.su_strategy};
}

// Trace sink writing one CSV row per (slot, channel).
class CsvTraceSink : public sim::TraceSink {
 public:
  explicit CsvTraceSink(const std::string& path) : out_(open_output(path)) {
    csv_row(out_, {"slot", "channel", "busy", "sensed_by_su", "su_success", "D_t"});
  }
  void slot_row(long long slot, int channel, bool busy, bool sensed_by_su, bool su_success,
                int sensed_count) override {
    csv_row(out_, {csv_num(slot), csv_num(channel), csv_num(busy ? 1 : 0),
                   csv_num(sensed_by_su ? 1 : 0), csv_num(su_success ? 1 : 0),
                   csv_num(sensed_count)});
  }

 private:
  std::ofstream out_;
};

}  // namespace

std::vector<AnalyzeRow> analyze_rows(const ExperimentSpec& spec) {
  std::vector<AnalyzeRow> rows;
  const std::vector<core::SuStrategy> strategies = [&] {
    // Single-channel tracking has no closed-form counterpart; analyze its
    // configs with the random baseline only.
    auto s = row_strategies(spec.base);
    for (auto& x : s)
      if (x == core::SuStrategy::SingleChannelTracking) x = core::SuStrategy::Random;
    return s;
  }();

  for (double value : spec.sweep_values) {
    const core::NetworkConfig cfg = apply_sweep(spec.base, spec.sweep_param, value);
    for (core::PuMode mode : {core::PuMode::NetworkCoding, core::PuMode::Arq}) {
      core::NetworkConfig mcfg = cfg;
      mcfg.pu_mode = mode;

      bool stable = true;
      analysis::ChannelOccupancyProfile prof{};
      try {
        prof = analysis::pu_profile(mcfg);
      } catch (const analysis::UnstableRegime&) {
        stable = false;
      }

      for (core::SuStrategy strat : strategies) {
        // The fixed point does not depend on the formula mode; solve once.
        analysis::AdaptiveFixedPoint fp{};
        bool have_fp = false;
        if (stable && strat == core::SuStrategy::AdaptiveTwoStage) {
          fp = analysis::solve_adaptive_fixed_point(prof.idle_prob, mcfg.num_channels,
                                                    mcfg.minislots_per_slot, mcfg.backoff);
          have_fp = true;
        }
        for (analysis::FormulaMode fm : spec.formula_modes) {
          AnalyzeRow row;
          row.value = value;
          row.cfg = mcfg;
          row.fmode = fm;
          row.mode = mode;
          row.strategy = strat;
          row.stable = stable;
          if (!stable) {
            row.service_time = row.max_tput = row.idle_prob = kNaN;
            row.p_r = row.sense_cost = row.eta_s = kNaN;
            row.pi0 = row.delta = kNaN;
            rows.push_back(row);
            continue;
          }
          row.service_time = prof.expected_service_time;
          row.max_tput = prof.max_stable_throughput;
          row.idle_prob = prof.idle_prob;
          analysis::SuThroughputReport rep{};
          if (have_fp) {
            rep = analysis::su_throughput_adaptive(prof.idle_prob, mcfg.num_channels,
                                                   mcfg.minislots_per_slot, fp, fm);
            row.pi0 = fp.list_prob;
            row.delta = fp.prediction_gap;
            row.iterations = fp.iterations;
          } else {
            rep = analysis::su_throughput_random(prof.idle_prob, mcfg.num_channels,
                                                 mcfg.minislots_per_slot, fm);
            row.pi0 = kNaN;
            row.delta = kNaN;
            row.iterations = 0;
          }
          row.p_r = rep.success_prob;
          row.sense_cost = rep.expected_sensing_cost;
          row.eta_s = rep.throughput;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::vector<SimRow> simulate_rows(const ExperimentSpec& spec, const CommandOptions& opts) {
  std::vector<SimRow> rows;
  const std::uint64_t base_seed = opts.seed ? *opts.seed : spec.sim.seed;
  core::RngStream row_seeder(base_seed);

  std::unique_ptr<CsvTraceSink> sink;
  if (opts.trace) {
    const std::string out = resolved_output(spec, opts, "simulate.csv");
    sink = std::make_unique<CsvTraceSink>(out + ".trace.csv");
  }

  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    const double value = spec.sweep_values[i];
    sim::SimParams sp = spec.sim;
    sp.cfg = apply_sweep(spec.base, spec.sweep_param, value);
    sp.seed = row_seeder.derive(i).seed();
    const auto strategies = row_strategies(sp.cfg);
    // Trace only the first sweep point to keep dumps readable.
    const auto reports = sim::run_experiment_multi(sp, strategies, i == 0 ? sink.get() : nullptr);
    for (size_t si = 0; si < strategies.size(); ++si) {
      SimRow row;
      row.value = value;
      row.cfg = sp.cfg;
      row.cfg.su_strategy = strategies[si];
      row.strategy = strategies[si];
      row.row_seed = sp.seed;
      row.rep = reports[si];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

void write_analyze_csv(std::ostream& out, const std::vector<AnalyzeRow>& rows,
                       const ExperimentSpec& spec) {
  csv_row(out, {"param", "value", "pu_mode", "su_strategy", "formula_mode", "N", "L", "m",
                "lambda", "epsilon", "B", "k", "q", "stable", "service_time", "eta_p",
                "idle_prob", "p_r", "sense_cost", "eta_s", "pi0", "delta", "iterations"});
  for (const auto& r : rows) {
    csv_row(out,
            {to_string(spec.sweep_param), csv_num(r.value), core::to_string(r.mode),
             core::to_string(r.strategy), fmode_name(r.fmode), csv_num(r.cfg.num_channels),
             csv_num(r.cfg.num_receivers), csv_num(r.cfg.batch_size),
             csv_num(r.cfg.arrival_rate), csv_num(r.cfg.erasure_prob),
             csv_num(r.cfg.minislots_per_slot), csv_num(r.cfg.backoff),
             csv_num(static_cast<unsigned long long>(r.cfg.field_size)),
             csv_num(r.stable ? 1 : 0), csv_num(r.service_time), csv_num(r.max_tput),
             csv_num(r.idle_prob), csv_num(r.p_r), csv_num(r.sense_cost), csv_num(r.eta_s),
             csv_num(r.pi0), csv_num(r.delta), csv_num(r.iterations)});
  }
}

void write_sim_row(std::ostream& out, const ExperimentSpec& spec, const SimRow& r,
                   long long trial_col, long long slots, const sim::SimReport& rep) {
  csv_row(out, {to_string(spec.sweep_param), csv_num(r.value), csv_num(trial_col),
                csv_num(slots), core::to_string(r.cfg.pu_mode), core::to_string(r.strategy),
                csv_num(r.cfg.num_channels), csv_num(r.cfg.num_receivers),
                csv_num(r.cfg.batch_size), csv_num(r.cfg.arrival_rate),
                csv_num(r.cfg.erasure_prob), csv_num(r.cfg.minislots_per_slot),
                csv_num(r.cfg.backoff), csv_num(static_cast<unsigned long long>(r.row_seed)),
                csv_num(rep.pu_idle_prob.mean), csv_num(rep.pu_throughput.mean),
                csv_num(rep.su_success_prob.mean), csv_num(rep.su_sensing_cost.mean),
                csv_num(rep.su_throughput.mean), csv_num(rep.list_prob.mean),
                csv_num(rep.su_throughput.se), csv_num(rep.queue_stable ? 1 : 0)});
}

void write_sim_csv(std::ostream& out, const ExperimentSpec& spec,
                   const std::vector<SimRow>& rows) {
  csv_row(out, {"param", "value", "trial", "slots", "mode", "strategy", "N", "L", "m", "lambda",
                "epsilon", "B", "k", "seed", "pu_idle_hat", "pu_tput_hat", "p_r_hat",
                "sense_cost_hat", "eta_s_hat", "pi0_hat", "stderr_eta_s", "queue_stable"});
  for (const auto& r : rows)
    write_sim_row(out, spec, r, r.rep.trials, r.rep.slots_observed, r.rep);
}

double rel_diff(double analytic, double simulated) {
  return std::fabs(analytic - simulated) / std::max(std::fabs(simulated), 1e-12);
}

}  // namespace

int cmd_analyze(const ExperimentSpec& spec, const CommandOptions& opts, std::ostream& log) {
  ExperimentSpec s = spec;
  s.formula_modes = resolved_modes(spec, opts);
  const auto rows = analyze_rows(s);
  const std::string path = resolved_output(spec, opts, "analyze.csv");
  auto out = open_output(path);
  write_analyze_csv(out, rows, s);
  int unstable = 0;
  for (const auto& r : rows) unstable += !r.stable;
  log << "analyze: " << rows.size() << " rows -> " << path;
  if (unstable) log << " (" << unstable << " unstable rows flagged)";
  log << '\n';
  return kExitOk;
}

int cmd_simulate(const ExperimentSpec& spec, const CommandOptions& opts, std::ostream& log) {
  const auto rows = simulate_rows(spec, opts);
  const std::string path = resolved_output(spec, opts, "simulate.csv");
  auto out = open_output(path);
  write_sim_csv(out, spec, rows);
  int unstable = 0;
  for (const auto& r : rows) unstable += !r.rep.queue_stable;
  log << "simulate: " << rows.size() << " rows -> " << path;
  if (unstable) log << " (" << unstable << " rows with diverging queues)";
  log << '\n';
  return kExitOk;
}

int cmd_compare(const ExperimentSpec& spec, const CommandOptions& opts, std::ostream& log,
                CompareSummary* summary_out) {
  ExperimentSpec s = spec;
  s.formula_modes = {analysis::FormulaMode::Rederived, analysis::FormulaMode::AsPrinted};
  const auto arows = analyze_rows(s);
  const auto srows = simulate_rows(s, opts);

  // Index analytic rows by (value index, strategy, fmode) for the sim mode.
  auto a_key = [&](double value, core::SuStrategy strat, analysis::FormulaMode fm) {
    std::ostringstream k;
    k << csv_num(value) << '|' << core::to_string(strat) << '|' << fmode_name(fm);
    return k.str();
  };
  std::map<std::string, const AnalyzeRow*> a_index;
  for (const auto& r : arows)
    if (r.mode == spec.base.pu_mode) a_index[a_key(r.value, r.strategy, r.fmode)] = &r;

  const std::string path = resolved_output(spec, opts, "compare.csv");
  auto out = open_output(path);
  csv_row(out, {"param", "value", "strategy", "eta_s_sim", "se_eta_s", "eta_s_rederived",
                "eta_s_as_printed", "rel_diff_rederived", "rel_diff_as_printed", "p_r_sim",
                "p_r_rederived", "pi0_sim", "pi0_analytic", "gain_sim", "gain_rederived",
                "gain_as_printed", "queue_stable"});

  // Simulated adaptive-over-random gain needs both strategies at a value.
  std::map<double, const SimRow*> sim_adaptive, sim_random;
  for (const auto& r : srows) {
    if (r.strategy == core::SuStrategy::AdaptiveTwoStage) sim_adaptive[r.value] = &r;
    if (r.strategy == core::SuStrategy::Random) sim_random[r.value] = &r;
  }

  CompareSummary sum;
  double diff_total_red = 0.0, diff_total_ap = 0.0;
  int base_points = 0;
  double base_diff_total_red = 0.0;
  bool gain_floor_ok = true;
  sum.min_gain = 1e300;
  sum.max_gain = -1e300;

  for (const auto& r : srows) {
    const AnalyzeRow* ar = nullptr;
    const AnalyzeRow* ap = nullptr;
    auto it = a_index.find(a_key(r.value, r.strategy, analysis::FormulaMode::Rederived));
    if (it != a_index.end()) ar = it->second;
    it = a_index.find(a_key(r.value, r.strategy, analysis::FormulaMode::AsPrinted));
    if (it != a_index.end()) ap = it->second;
    if (!ar || !ap) {
      log << "compare: no analytic counterpart for strategy "
          << core::to_string(r.strategy) << " at value " << csv_num(r.value) << '\n';
      return kExitError;
    }

    const bool usable = ar->stable && r.rep.queue_stable;
    double dr = kNaN, dap = kNaN;
    if (usable) {
      dr = rel_diff(ar->eta_s, r.rep.su_throughput.mean);
      dap = rel_diff(ap->eta_s, r.rep.su_throughput.mean);
      ++sum.compared_points;
      diff_total_red += dr;
      diff_total_ap += dap;
      sum.max_rel_diff_rederived = std::max(sum.max_rel_diff_rederived, dr);
      sum.max_rel_diff_as_printed = std::max(sum.max_rel_diff_as_printed, dap);
      if (r.strategy == spec.base.su_strategy) {
        ++base_points;
        base_diff_total_red += dr;
      }
    }

    double gain_sim = kNaN, gain_red = kNaN, gain_ap = kNaN;
    if (r.strategy == core::SuStrategy::AdaptiveTwoStage) {
      auto itr = sim_random.find(r.value);
      if (itr != sim_random.end() && usable && itr->second->rep.queue_stable) {
        const double base = itr->second->rep.su_throughput.mean;
        gain_sim = (r.rep.su_throughput.mean - base) / std::max(base, 1e-12);
        sum.has_gain = true;
        sum.min_gain = std::min(sum.min_gain, gain_sim);
        sum.max_gain = std::max(sum.max_gain, gain_sim);
        if (!(gain_sim >= opts.min_gain)) gain_floor_ok = false;
        const AnalyzeRow* rr =
            a_index.count(a_key(r.value, core::SuStrategy::Random, analysis::FormulaMode::Rederived))
                ? a_index[a_key(r.value, core::SuStrategy::Random, analysis::FormulaMode::Rederived)]
                : nullptr;
        const AnalyzeRow* rap =
            a_index.count(a_key(r.value, core::SuStrategy::Random, analysis::FormulaMode::AsPrinted))
                ? a_index[a_key(r.value, core::SuStrategy::Random, analysis::FormulaMode::AsPrinted)]
                : nullptr;
        if (rr && rr->stable) gain_red = (ar->eta_s - rr->eta_s) / std::max(rr->eta_s, 1e-12);
        if (rap && rap->stable) gain_ap = (ap->eta_s - rap->eta_s) / std::max(rap->eta_s, 1e-12);
      }
    }

    csv_row(out, {to_string(spec.sweep_param), csv_num(r.value), core::to_string(r.strategy),
                  csv_num(r.rep.su_throughput.mean), csv_num(r.rep.su_throughput.se),
                  csv_num(ar->eta_s), csv_num(ap->eta_s), csv_num(dr), csv_num(dap),
                  csv_num(r.rep.su_success_prob.mean), csv_num(ar->p_r),
                  csv_num(r.rep.list_prob.mean), csv_num(ar->pi0), csv_num(gain_sim),
                  csv_num(gain_red), csv_num(gain_ap),
                  csv_num(r.rep.queue_stable ? 1 : 0)});
  }

  if (sum.compared_points > 0) {
    sum.mean_rel_diff_rederived = diff_total_red / sum.compared_points;
    sum.mean_rel_diff_as_printed = diff_total_ap / sum.compared_points;
  }
  const double base_mean =
      base_points > 0 ? base_diff_total_red / base_points : sum.mean_rel_diff_rederived;
  sum.bands_hold = base_points > 0 && base_mean <= opts.rel_tol && gain_floor_ok;
  if (!sum.has_gain) {
    sum.min_gain = 0.0;
    sum.max_gain = 0.0;
  }

  log << "compare: " << sum.compared_points << " points -> " << path << '\n'
      << "  rederived rel diff: mean " << csv_num(sum.mean_rel_diff_rederived) << ", max "
      << csv_num(sum.max_rel_diff_rederived) << " (base-strategy mean " << csv_num(base_mean)
      << ", band " << csv_num(opts.rel_tol) << ")\n"
      << "  as_printed rel diff: mean " << csv_num(sum.mean_rel_diff_as_printed) << ", max "
      << csv_num(sum.max_rel_diff_as_printed) << '\n';
  if (sum.has_gain)
    log << "  adaptive gain over random (sim): min " << csv_num(sum.min_gain) << ", max "
        << csv_num(sum.max_gain) << " (floor " << csv_num(opts.min_gain) << ")\n";
  log << "  bands " << (sum.bands_hold ? "hold" : "VIOLATED") << '\n';

  if (summary_out) *summary_out = sum;
  return sum.bands_hold ? kExitOk : kExitBandViolated;
}

int cmd_optimal_k(const ExperimentSpec& spec, int k_max, const CommandOptions& opts,
                  std::ostream& log) {
  const auto prof = analysis::pu_profile(spec.base);
  const auto search = analysis::optimal_backoff(prof.idle_prob, spec.base.num_channels,
                                                spec.base.minislots_per_slot, k_max);
  const std::string path = resolved_output(spec, opts, "optimal_k.csv");
  auto out = open_output(path);
  csv_row(out, {"k", "pi0", "delta"});
  for (int k = 0; k <= k_max; ++k) {
    const auto fp = analysis::solve_adaptive_fixed_point(prof.idle_prob, spec.base.num_channels,
                                                         spec.base.minislots_per_slot, k);
    csv_row(out, {csv_num(k), csv_num(fp.list_prob), csv_num(fp.prediction_gap)});
  }
  const int rule = analysis::recommended_backoff(spec.base.batch_size, spec.base.num_receivers,
                                                 spec.base.erasure_prob);
  log << "optimal-k: idle_prob " << csv_num(prof.idle_prob) << ", best k "
      << search.best_backoff << " (delta " << csv_num(search.distance_curve[search.best_backoff])
      << "), half-service-time rule suggests k = " << rule << " -> " << path << '\n';
  return kExitOk;
}

int cmd_rlnc_check(const RlncCheckOptions& opts, std::ostream& log) {
  using namespace specshape::rlnc;
  bool ok = true;

  if (opts.emit_path) {
    const auto vecs = generate_vectors(opts.field_bits, opts.gen_size, opts.payload_len,
                                       opts.count, opts.seed);
    auto out = open_output(*opts.emit_path);
    write_vectors(out, vecs);
    const auto fails = verify_vectors(vecs);
    ok = ok && fails.empty();
    log << "rlnc-check: wrote " << vecs.size() << " vectors -> " << *opts.emit_path << '\n';
  }

  if (opts.verify_path) {
    std::ifstream in(*opts.verify_path);
    if (!in) {
      log << "rlnc-check: cannot open '" << *opts.verify_path << "'\n";
      return kExitError;
    }
    const auto vecs = parse_vectors(in);
    const auto fails = verify_vectors(vecs);
    for (const auto& f : fails) log << "rlnc-check: FAIL " << f << '\n';
    log << "rlnc-check: " << (vecs.size() - fails.size()) << "/" << vecs.size()
        << " vectors verified\n";
    ok = ok && fails.empty();
  }

  if (!opts.emit_path && !opts.verify_path) {
    // Built-in self-test: exact small-field enumeration plus a sampled
    // innovation probe against the nonsingularity product.
    GaloisField gf2(1);
    core::RngStream rng(opts.seed);
    const auto exact = innovation_probability(gf2, 2, 1, rng);
    const bool exact_ok = exact.exact && exact.prob == 0.375;
    log << "rlnc-check: GF(2) m=2 innovation " << exact.prob << " (expect 0.375 exactly) "
        << (exact_ok ? "ok" : "FAIL") << '\n';
    ok = ok && exact_ok;

    GaloisField gf(opts.field_bits);
    const auto est = innovation_probability(gf, opts.gen_size, opts.samples, rng);
    double product = 1.0;
    for (int i = 1; i <= opts.gen_size; ++i)
      product *= 1.0 - std::pow(static_cast<double>(gf.order()), -i);
    const double slack = est.exact ? 1e-15 : 3.0 * std::max(est.std_err, 1e-9);
    const bool probe_ok = std::fabs(est.prob - product) <= slack + 1e-12;
    log << "rlnc-check: GF(2^" << opts.field_bits << ") m=" << opts.gen_size << " innovation "
        << est.prob << (est.exact ? " (exact)" : " (sampled)") << " vs product " << product
        << ' ' << (probe_ok ? "ok" : "FAIL") << '\n';
    ok = ok && probe_ok;
  }

  return ok ? kExitOk : kExitBandViolated;
}

}  // namespace specshape::cli
