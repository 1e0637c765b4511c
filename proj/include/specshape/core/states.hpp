#pragma once

#include <vector>

namespace specshape::core {

// One primary subnetwork's service state inside the simulator.
struct PuChannelState {
  long long queue_len = 0;          // packets waiting (not in service)
  bool serving = false;             // a generation/packet is on the air
  int in_service = 0;               // packets currently being served
  std::vector<int> receiver_progress;  // per receiver: receptions counted
                                       // toward the current generation
};

// Secondary-user adaptive-sensing state: one backoff timer per channel.
// timer == 0 means the channel is in the sensing list this slot.
struct SuSensingState {
  std::vector<int> timers;

  explicit SuSensingState(int channels) : timers(channels, 0) {}

  int list_size() const {
    int n = 0;
    for (int t : timers) n += (t == 0);
    return n;
  }

  bool within_bounds(int backoff) const {
    for (int t : timers)
      if (t < 0 || t > backoff) return false;
    return true;
  }
};

// What the secondary user got out of one slot.
struct SlotOutcome {
  int sensed_count = 0;    // mini-slots spent sensing
  bool success = false;    // found an idle channel
  int tx_minislots = 0;    // mini-slots left for transmission (0 on failure)
};

}  // namespace specshape::core
