#pragma once

#include <vector>

#include "specshape/core/rng.hpp"
#include "specshape/core/states.hpp"

namespace specshape::sim {

// One slot of memoryless sensing: scan all channels in uniform random order
// until the first idle one, spending at most `budget` mini-slots.
// `sensed_out`, when given, receives the sensed channel indices in order.
core::SlotOutcome su_step_random(const std::vector<char>& busy, int budget,
                                 core::RngStream& rng, std::vector<int>* sensed_out = nullptr);

// One slot of two-stage adaptive sensing: scan the zero-timer list first;
// if every listed channel was sensed busy and budget remains, scan the
// backed-off channels.  Busy first-stage channels restart their timer at
// `backoff`; a backed-off channel found idle resets to 0; all other nonzero
// timers lose one at the slot boundary.
core::SlotOutcome su_step_adaptive(core::SuSensingState& st, const std::vector<char>& busy,
                                   int budget, int backoff, core::RngStream& rng,
                                   std::vector<int>* sensed_out = nullptr);

// Single-channel tracker: after a busy sense, skip the channel for
// `backoff_slots` slots (counter countdown) before sensing again.
core::SlotOutcome su_step_single_channel(int& counter, bool busy, int budget, int backoff_slots);

}  // namespace specshape::sim
