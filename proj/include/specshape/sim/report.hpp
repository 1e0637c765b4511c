#pragma once

#include <cstdint>
#include <vector>

#include "specshape/core/config.hpp"

namespace specshape::sim {

// Point estimate with its standard error.  With several trials the error
// comes from the across-trial spread; with a single trial it falls back to
// within-run slot statistics (which ignore autocorrelation).
struct EstimatorStat {
  double mean = 0.0;
  double se = 0.0;
};

struct SimReport {
  core::SuStrategy strategy = core::SuStrategy::Random;
  long long slots_observed = 0;  // kept slots summed over trials
  int trials = 0;
  std::uint64_t seed = 0;

  EstimatorStat pu_idle_prob;    // fraction of (channel, slot) pairs idle
  EstimatorStat pu_throughput;   // packets delivered per slot per channel
  std::vector<double> pu_idle_per_channel;

  EstimatorStat su_success_prob;   // P(found an idle channel)
  EstimatorStat su_sensing_cost;   // mean sensed mini-slots on success
  EstimatorStat su_throughput;     // mean tx mini-slots per slot
  EstimatorStat list_prob;         // fraction of (channel, slot) with timer 0
  std::vector<double> list_size_hist;  // distribution of sensing-list size

  bool queue_stable = true;
};

}  // namespace specshape::sim
