#pragma once

#include <climits>
#include <vector>

#include "specshape/sim/params.hpp"
#include "specshape/sim/report.hpp"

namespace specshape::sim {

// Receives one row per (slot, channel) when tracing is on.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void slot_row(long long slot, int channel, bool busy, bool sensed_by_su,
                        bool su_success, int sensed_count) = 0;
};

// Runs `trials` independent replications of the slotted system and pools
// the estimators.  The secondary user observes but never disturbs the
// primary channels, so several strategies can watch the same occupancy
// sample path; every strategy's sensing stream starts from the same derived
// seed, which makes strategies with identical per-slot behaviour (adaptive
// with backoff 0 vs random) produce bit-identical traces.
std::vector<SimReport> run_experiment_multi(const SimParams& params,
                                            const std::vector<core::SuStrategy>& strategies,
                                            TraceSink* trace = nullptr);

// Single-strategy convenience wrapper using params.cfg.su_strategy.
SimReport run_experiment(const SimParams& params, TraceSink* trace = nullptr);

// Primary side only, channel 0 of the config: occupancy estimators plus the
// busy/idle sample path when requested.
struct PuRunStats {
  double idle_hat = 0.0;
  double tput_hat = 0.0;       // packets per slot
  long long slots = 0;         // kept slots
  bool queue_stable = true;
  long long min_busy_run = LLONG_MAX;  // over completed busy runs, full horizon
  std::vector<char> busy_trace;        // full horizon, when requested
};

PuRunStats run_pu_channel(const SimParams& params, bool keep_trace = false);

}  // namespace specshape::sim
