#pragma once

#include <memory>
#include <vector>

#include "specshape/core/config.hpp"
#include "specshape/core/rng.hpp"
#include "specshape/core/states.hpp"
#include "specshape/rlnc/codec.hpp"
#include "specshape/sim/params.hpp"

namespace specshape::sim {

// One primary subnetwork: Bernoulli arrivals into a queue served in coded
// generations (or single packets under Arq).  Slot order: arrivals, then
// service start, then one broadcast transmission with independent
// per-receiver erasures.  A generation started in this slot transmits in
// this slot; completion is visible at the slot boundary.
class PuChannel {
 public:
  PuChannel(const core::NetworkConfig& cfg, ServiceRealism realism, int payload_elems);

  struct SlotResult {
    bool busy = false;
    int delivered = 0;  // packets completed at this slot's end
  };

  SlotResult step(core::RngStream& rng);

  const core::PuChannelState& state() const { return st_; }
  long long arrived() const { return arrived_; }
  long long delivered_total() const { return delivered_; }

 private:
  void start_service_if_ready(core::RngStream& rng);
  bool receivers_done() const;
  void check_conservation() const;  // arrived == delivered + queued + in service

  core::NetworkConfig cfg_;
  ServiceRealism realism_;
  int payload_elems_;
  int m_eff_;
  core::PuChannelState st_;

  // Payload-realism state: live encoder sources and per-receiver decoders.
  std::unique_ptr<rlnc::GaloisField> gf_;
  std::vector<std::vector<std::uint32_t>> sources_;
  std::vector<rlnc::DecoderState> decoders_;
  int verified_generations_ = 0;

  long long arrived_ = 0;
  long long delivered_ = 0;
};

// Slots needed to finish one generation on a saturated channel, sampled by
// running just the service process.
long long sample_completion_time(int batch_size, int receivers, double erasure_prob,
                                 core::RngStream& rng,
                                 ServiceRealism realism = ServiceRealism::CountReceptions,
                                 std::uint64_t field_size = 65536, int payload_elems = 8);

}  // namespace specshape::sim
