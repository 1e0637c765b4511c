#include "specshape/sim/su_strategies.hpp"

#include <numeric>

namespace specshape::sim {

namespace {

struct ScanResult {
  int sensed = 0;
  int found = -1;  // channel index of the first idle hit, or -1
};

// Partial Fisher-Yates walk over `cands`: each next sensed channel is drawn
// uniformly from the not-yet-sensed remainder.  Stops at the first idle
// channel or when the budget is gone.  The first `sensed` entries of
// `cands` end up being the sensed channels in order.
ScanResult scan_for_idle(std::vector<int>& cands, const std::vector<char>& busy, int budget,
                         core::RngStream& rng) {
  ScanResult r;
  const int n = static_cast<int>(cands.size());
  for (int i = 0; i < n; ++i) {
    if (r.sensed == budget) break;
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(cands[i], cands[j]);
    ++r.sensed;
    if (!busy[cands[i]]) {
      r.found = cands[i];
      break;
    }
  }
  return r;
}

void record_sensed(const std::vector<int>& cands, int sensed, std::vector<int>* out) {
  if (!out) return;
  out->insert(out->end(), cands.begin(), cands.begin() + sensed);
}

}  // namespace

core::SlotOutcome su_step_random(const std::vector<char>& busy, int budget, core::RngStream& rng,
                                 std::vector<int>* sensed_out) {
  if (sensed_out) sensed_out->clear();
  std::vector<int> cands(busy.size());
  std::iota(cands.begin(), cands.end(), 0);
  const ScanResult r = scan_for_idle(cands, busy, budget, rng);
  record_sensed(cands, r.sensed, sensed_out);
  const bool ok = r.found >= 0;
  return {r.sensed, ok, ok ? budget - r.sensed : 0};
}

core::SlotOutcome su_step_adaptive(core::SuSensingState& st, const std::vector<char>& busy,
                                   int budget, int backoff, core::RngStream& rng,
                                   std::vector<int>* sensed_out) {
  if (sensed_out) sensed_out->clear();
  const int n_ch = static_cast<int>(st.timers.size());
  std::vector<int> listed, backed;
  listed.reserve(n_ch);
  for (int c = 0; c < n_ch; ++c) (st.timers[c] == 0 ? listed : backed).push_back(c);

  const ScanResult r1 = scan_for_idle(listed, busy, budget, rng);
  record_sensed(listed, r1.sensed, sensed_out);
  int sensed = r1.sensed;
  int found = r1.found;

  int backup_found = -1;
  if (found < 0 && r1.sensed == static_cast<int>(listed.size()) && sensed < budget &&
      !backed.empty()) {
    const ScanResult r2 = scan_for_idle(backed, busy, budget - sensed, rng);
    record_sensed(backed, r2.sensed, sensed_out);
    sensed += r2.sensed;
    found = r2.found;
    backup_found = r2.found;
  }

  // Slot-boundary timer update: countdown first, then this slot's resets.
  for (int& t : st.timers)
    if (t > 0) --t;
  for (int i = 0; i < r1.sensed; ++i) {
    const int c = listed[i];
    if (c != r1.found) st.timers[c] = backoff;  // sensed busy in stage one
  }
  if (backup_found >= 0) st.timers[backup_found] = 0;

  const bool ok = found >= 0;
  return {sensed, ok, ok ? budget - sensed : 0};
}

core::SlotOutcome su_step_single_channel(int& counter, bool busy, int budget, int backoff_slots) {
  if (counter > 0) {
    --counter;
    return {0, false, 0};
  }
  if (!busy) return {1, true, budget - 1};
  counter = backoff_slots;
  return {1, false, 0};
}

}  // namespace specshape::sim
