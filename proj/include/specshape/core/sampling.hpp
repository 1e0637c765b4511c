#pragma once

#include <vector>

#include "specshape/core/rng.hpp"

namespace specshape::core {

// Bernoulli(lambda) packet arrival for one slot: 0 or 1 packets.
inline int sample_arrival(double arrival_rate, RngStream& rng) {
  return rng.bernoulli(arrival_rate) ? 1 : 0;
}

// Independent per-receiver reception flags for one transmitted packet;
// element j is true iff receiver j got the packet (probability 1 - epsilon).
inline std::vector<bool> sample_reception(double erasure_prob, int receivers, RngStream& rng) {
  std::vector<bool> got(receivers);
  for (int j = 0; j < receivers; ++j) got[j] = !rng.bernoulli(erasure_prob);
  return got;
}

}  // namespace specshape::core
