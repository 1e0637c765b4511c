#include "specshape/sim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specshape/sim/pu_channel.hpp"
#include "specshape/sim/su_strategies.hpp"

namespace specshape::sim {

namespace {

// Stream ids under one trial's master stream.  All strategies share the
// sensing id on purpose: strategies that behave identically slot by slot
// then consume identical draws and produce identical traces.
constexpr std::uint64_t kSensingStream = 0x50;
constexpr std::uint64_t kChannelStreamBase = 0x100;

struct StrategyAccum {
  unsigned long long good = 0;      // sum of success flags
  unsigned long long cost = 0;      // sum of D_t on successful slots
  unsigned long long cost_sq = 0;
  unsigned long long tx = 0;        // sum of (B - D_t) on successful slots
  unsigned long long tx_sq = 0;
  unsigned long long timer_zero = 0;  // sum over channels of 1{timer == 0}
  std::vector<unsigned long long> list_hist;
  long long slots = 0;
};

struct TrialStats {
  std::vector<StrategyAccum> per_strategy;
  std::vector<double> idle_per_channel;  // kept-slot idle fraction
  double idle_mean = 0.0;
  double tput = 0.0;                     // packets per slot per channel
  unsigned long long delivered_kept = 0;
  unsigned long long delivered_sq = 0;   // per-slot totals squared (kept)
  unsigned long long idle_pairs = 0;     // kept (channel, slot) idle pairs
  bool stable = true;
  long long min_busy_run = LLONG_MAX;
  long long kept = 0;
};

TrialStats run_trial(const SimParams& p, const std::vector<core::SuStrategy>& strategies,
                     std::uint64_t trial_seed, TraceSink* trace) {
  const auto& cfg = p.cfg;
  const int n_ch = cfg.num_channels;
  const int budget = cfg.minislots_per_slot;
  const long long warmup = p.effective_warmup();

  core::RngStream master(trial_seed);
  std::vector<core::RngStream> ch_rng;
  ch_rng.reserve(n_ch);
  for (int j = 0; j < n_ch; ++j) ch_rng.push_back(master.derive(kChannelStreamBase + j));

  struct SuRun {
    core::SuStrategy strat;
    core::SuSensingState st;
    int counter = 0;
    core::RngStream rng;
  };
  std::vector<SuRun> sus;
  for (auto s : strategies)
    sus.push_back({s, core::SuSensingState(n_ch), 0, master.derive(kSensingStream)});

  std::vector<PuChannel> channels;
  if (p.occupancy == OccupancyModel::PuQueues) {
    channels.reserve(n_ch);
    for (int j = 0; j < n_ch; ++j) channels.emplace_back(cfg, p.service, p.payload_elems);
  }

  TrialStats ts;
  ts.per_strategy.assign(strategies.size(), StrategyAccum{});
  for (auto& acc : ts.per_strategy) acc.list_hist.assign(n_ch + 1, 0);
  std::vector<unsigned long long> idle_kept(n_ch, 0);
  std::vector<unsigned long long> busy_all(n_ch, 0);
  std::vector<long long> run_len(n_ch, 0);

  std::vector<char> busy(n_ch, 0);
  std::vector<int> sensed_scratch;

  for (long long slot = 0; slot < p.horizon; ++slot) {
    const bool kept = slot >= warmup;
    unsigned long long delivered_now = 0;
    for (int j = 0; j < n_ch; ++j) {
      bool b;
      if (p.occupancy == OccupancyModel::PuQueues) {
        const auto r = channels[j].step(ch_rng[j]);
        b = r.busy;
        if (kept) delivered_now += r.delivered;
      } else {
        b = ch_rng[j].bernoulli(1.0 - p.iid_idle_prob);
      }
      busy[j] = b;
      if (b) {
        ++busy_all[j];
        ++run_len[j];
      } else {
        if (run_len[j] > 0) ts.min_busy_run = std::min(ts.min_busy_run, run_len[j]);
        run_len[j] = 0;
        if (kept) ++idle_kept[j];
      }
    }
    if (kept) {
      ts.delivered_kept += delivered_now;
      ts.delivered_sq += delivered_now * delivered_now;
      ++ts.kept;
    }

    for (size_t si = 0; si < sus.size(); ++si) {
      auto& su = sus[si];
      auto& acc = ts.per_strategy[si];
      // List membership is a slot-start quantity; read it before stepping.
      int n_list = n_ch;
      if (su.strat == core::SuStrategy::AdaptiveTwoStage) n_list = su.st.list_size();
      if (su.strat == core::SuStrategy::SingleChannelTracking) n_list = su.counter == 0 ? 1 : 0;

      core::SlotOutcome o;
      std::vector<int>* sensed = (trace && si == 0) ? &sensed_scratch : nullptr;
      switch (su.strat) {
        case core::SuStrategy::Random:
          o = su_step_random(busy, budget, su.rng, sensed);
          break;
        case core::SuStrategy::AdaptiveTwoStage:
          o = su_step_adaptive(su.st, busy, budget, cfg.backoff, su.rng, sensed);
          break;
        case core::SuStrategy::SingleChannelTracking:
          o = su_step_single_channel(su.counter, busy[0], budget, cfg.effective_batch_size());
          if (sensed) {
            sensed->clear();
            if (o.sensed_count > 0) sensed->push_back(0);
          }
          break;
      }

      if (kept) {
        ++acc.slots;
        acc.good += o.success;
        if (o.success) {
          acc.cost += static_cast<unsigned long long>(o.sensed_count);
          acc.cost_sq += static_cast<unsigned long long>(o.sensed_count) * o.sensed_count;
          acc.tx += static_cast<unsigned long long>(o.tx_minislots);
          acc.tx_sq += static_cast<unsigned long long>(o.tx_minislots) * o.tx_minislots;
        }
        acc.timer_zero += static_cast<unsigned long long>(n_list);
        ++acc.list_hist[n_list];
      }
      if (trace && si == 0) {
        for (int j = 0; j < n_ch; ++j) {
          const bool was_sensed =
              std::find(sensed_scratch.begin(), sensed_scratch.end(), j) != sensed_scratch.end();
          trace->slot_row(slot, j, busy[j], was_sensed, o.success, o.sensed_count);
        }
      }
    }
  }

  // Sample-path identity, exact in integers: sum (B-D)1 = B sum 1 - sum D·1.
  for (const auto& acc : ts.per_strategy) {
    if (acc.tx != static_cast<unsigned long long>(budget) * acc.good - acc.cost)
      throw std::logic_error("sample-path throughput identity violated");
  }

  ts.idle_per_channel.resize(n_ch);
  const long long kept_slots = ts.kept;
  for (int j = 0; j < n_ch; ++j) {
    ts.idle_per_channel[j] = kept_slots > 0 ? static_cast<double>(idle_kept[j]) / kept_slots : 0.0;
    ts.idle_mean += ts.idle_per_channel[j];
    ts.idle_pairs += idle_kept[j];
  }
  ts.idle_mean /= n_ch;
  ts.tput = kept_slots > 0 ? static_cast<double>(ts.delivered_kept) / (kept_slots * n_ch) : 0.0;

  if (p.occupancy == OccupancyModel::PuQueues) {
    const int m_eff = cfg.effective_batch_size();
    for (int j = 0; j < n_ch; ++j) {
      const double busy_frac = static_cast<double>(busy_all[j]) / p.horizon;
      const double threshold = 100.0 * std::max(m_eff, 1) / std::max(busy_frac, 0.01);
      if (static_cast<double>(channels[j].state().queue_len) > threshold) ts.stable = false;
    }
  }
  return ts;
}

double across_trial_se(const std::vector<double>& xs) {
  const size_t n = xs.size();
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(n) * (n - 1)));
}

// Slot-level standard error from integer sums, for single-trial runs.
// Ignores autocorrelation; across-trial spread is preferred when available.
double within_se(unsigned long long sum, unsigned long long sum_sq, long long n) {
  if (n < 2) return 0.0;
  const double mean = static_cast<double>(sum) / n;
  const double var = static_cast<double>(sum_sq) / n - mean * mean;
  return var > 0 ? std::sqrt(var / n) : 0.0;
}

double bernoulli_se(double p, long long n) {
  if (n < 1) return 0.0;
  const double v = p * (1.0 - p);
  return v > 0 ? std::sqrt(v / n) : 0.0;
}

}  // namespace

void validate_sim_params(const SimParams& p) {
  core::validate_config(p.cfg);
  std::vector<std::string> bad;
  if (p.horizon < 1) bad.push_back("horizon must be >= 1");
  if (p.effective_warmup() >= p.horizon) bad.push_back("horizon must exceed warmup");
  if (p.trials < 1) bad.push_back("trials must be >= 1");
  if (p.occupancy == OccupancyModel::IidIdle &&
      !(p.iid_idle_prob >= 0.0 && p.iid_idle_prob <= 1.0))
    bad.push_back("iid_idle_prob out of range [0, 1]");
  if (p.service == ServiceRealism::RlncPayload && p.payload_elems < 1)
    bad.push_back("payload_elems must be >= 1");
  if (!bad.empty()) throw core::ConfigError(std::move(bad));
}

std::vector<SimReport> run_experiment_multi(const SimParams& params,
                                            const std::vector<core::SuStrategy>& strategies,
                                            TraceSink* trace) {
  validate_sim_params(params);
  if (strategies.empty()) throw std::invalid_argument("need at least one strategy");
  for (auto s : strategies) {
    core::NetworkConfig probe = params.cfg;
    probe.su_strategy = s;
    core::validate_config(probe);  // e.g. single-channel tracking needs N == 1
  }

  const int n_ch = params.cfg.num_channels;
  core::RngStream seeder(params.seed);
  std::vector<TrialStats> trials;
  trials.reserve(params.trials);
  for (int t = 0; t < params.trials; ++t) {
    const std::uint64_t trial_seed = seeder.derive(static_cast<std::uint64_t>(t)).seed();
    trials.push_back(run_trial(params, strategies, trial_seed, t == 0 ? trace : nullptr));
  }

  std::vector<SimReport> reports;
  for (size_t si = 0; si < strategies.size(); ++si) {
    SimReport rep;
    rep.strategy = strategies[si];
    rep.trials = params.trials;
    rep.seed = params.seed;
    rep.pu_idle_per_channel.assign(n_ch, 0.0);
    rep.list_size_hist.assign(n_ch + 1, 0.0);

    std::vector<double> v_idle, v_tput, v_pr, v_cost, v_tx, v_pi0;
    unsigned long long hist_total = 0;
    for (const auto& ts : trials) {
      const auto& acc = ts.per_strategy[si];
      rep.slots_observed += acc.slots;
      const double n = static_cast<double>(acc.slots);
      v_idle.push_back(ts.idle_mean);
      v_tput.push_back(ts.tput);
      v_pr.push_back(acc.good / n);
      v_cost.push_back(acc.cost / n);
      v_tx.push_back(acc.tx / n);
      v_pi0.push_back(acc.timer_zero / (n * n_ch));
      for (int j = 0; j < n_ch; ++j) rep.pu_idle_per_channel[j] += ts.idle_per_channel[j];
      for (int h = 0; h <= n_ch; ++h) {
        rep.list_size_hist[h] += static_cast<double>(acc.list_hist[h]);
        hist_total += acc.list_hist[h];
      }
      rep.queue_stable = rep.queue_stable && ts.stable;
    }
    for (int j = 0; j < n_ch; ++j) rep.pu_idle_per_channel[j] /= trials.size();
    for (int h = 0; h <= n_ch; ++h) rep.list_size_hist[h] /= static_cast<double>(hist_total);

    auto fill = [&](EstimatorStat& st, const std::vector<double>& xs) {
      st.mean = 0.0;
      for (double x : xs) st.mean += x;
      st.mean /= xs.size();
      st.se = xs.size() >= 2 ? across_trial_se(xs) : 0.0;
    };
    fill(rep.pu_idle_prob, v_idle);
    fill(rep.pu_throughput, v_tput);
    fill(rep.su_success_prob, v_pr);
    fill(rep.su_sensing_cost, v_cost);
    fill(rep.su_throughput, v_tx);
    fill(rep.list_prob, v_pi0);

    if (params.trials == 1) {
      const auto& ts = trials[0];
      const auto& acc = ts.per_strategy[si];
      rep.su_success_prob.se = bernoulli_se(rep.su_success_prob.mean, acc.slots);
      rep.su_sensing_cost.se = within_se(acc.cost, acc.cost_sq, acc.slots);
      rep.su_throughput.se = within_se(acc.tx, acc.tx_sq, acc.slots);
      rep.list_prob.se = bernoulli_se(rep.list_prob.mean, acc.slots * n_ch);
      rep.pu_idle_prob.se = bernoulli_se(rep.pu_idle_prob.mean, acc.slots * n_ch);
      rep.pu_throughput.se =
          within_se(ts.delivered_kept, ts.delivered_sq, ts.kept) / n_ch;
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

SimReport run_experiment(const SimParams& params, TraceSink* trace) {
  return run_experiment_multi(params, {params.cfg.su_strategy}, trace)[0];
}

PuRunStats run_pu_channel(const SimParams& params, bool keep_trace) {
  validate_sim_params(params);
  const auto& cfg = params.cfg;
  const long long warmup = params.effective_warmup();

  core::RngStream master(core::RngStream(params.seed).derive(0).seed());
  core::RngStream rng = master.derive(0x100);  // same stream as channel 0 of trial 0

  PuChannel ch(cfg, params.service, params.payload_elems);
  PuRunStats out;
  if (keep_trace) out.busy_trace.reserve(params.horizon);

  unsigned long long idle_kept = 0, delivered_kept = 0, busy_all = 0;
  long long run = 0;
  for (long long slot = 0; slot < params.horizon; ++slot) {
    const auto r = ch.step(rng);
    if (keep_trace) out.busy_trace.push_back(r.busy ? 1 : 0);
    if (r.busy) {
      ++busy_all;
      ++run;
    } else {
      if (run > 0) out.min_busy_run = std::min(out.min_busy_run, run);
      run = 0;
    }
    if (slot >= warmup) {
      ++out.slots;
      if (!r.busy) ++idle_kept;
      delivered_kept += r.delivered;
    }
  }
  out.idle_hat = static_cast<double>(idle_kept) / out.slots;
  out.tput_hat = static_cast<double>(delivered_kept) / out.slots;
  const double busy_frac = static_cast<double>(busy_all) / params.horizon;
  const double threshold =
      100.0 * std::max(cfg.effective_batch_size(), 1) / std::max(busy_frac, 0.01);
  out.queue_stable = static_cast<double>(ch.state().queue_len) <= threshold;
  return out;
}

}  // namespace specshape::sim
