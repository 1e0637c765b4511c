#pragma once

#include <cstdint>

#include "specshape/core/config.hpp"

namespace specshape::sim {

// What drives per-slot channel busy flags: the full queue/service model, or
// an i.i.d. Bernoulli draw per channel (used to validate the memoryless
// analysis in isolation).
enum class OccupancyModel { PuQueues, IidIdle };

// How a reception counts toward generation completion: plain counting to
// batch_size, or actual random-linear decoding where only innovative
// packets advance the rank.
enum class ServiceRealism { CountReceptions, RlncPayload };

struct SimParams {
  core::NetworkConfig cfg;
  long long horizon = 100000;  // slots simulated per trial
  long long warmup = -1;       // slots excluded from estimators; -1 = 10% of horizon
  int trials = 1;
  std::uint64_t seed = 1;
  OccupancyModel occupancy = OccupancyModel::PuQueues;
  double iid_idle_prob = 0.5;  // only used with OccupancyModel::IidIdle
  ServiceRealism service = ServiceRealism::CountReceptions;
  int payload_elems = 64;      // payload length for ServiceRealism::RlncPayload

  long long effective_warmup() const { return warmup >= 0 ? warmup : horizon / 10; }
};

// Throws core::ConfigError when the run setup is unusable.
void validate_sim_params(const SimParams& p);

}  // namespace specshape::sim
