#pragma once

#include "specshape/analysis/errors.hpp"
#include "specshape/core/config.hpp"

namespace specshape::analysis {

// Stationary occupancy summary of one primary channel.
struct ChannelOccupancyProfile {
  core::PuMode mode;
  int effective_batch_size;       // packets delivered per service period
  double expected_service_time;   // slots to finish one generation/packet
  double max_stable_throughput;   // packets per slot the channel can sustain
  double idle_prob;               // stationary P(channel idle in a slot)
};

// Applies the batch service model to the configured mode.  Throws
// UnstableRegime when arrival_rate >= max_stable_throughput.
ChannelOccupancyProfile pu_profile(const core::NetworkConfig& cfg, double tail_tol = 1e-12);

}  // namespace specshape::analysis
