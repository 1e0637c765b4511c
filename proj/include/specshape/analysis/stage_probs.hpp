#pragma once

#include <vector>

namespace specshape::analysis {

// Per-slot sensing probabilities of a single tagged channel under the
// two-stage adaptive policy, averaged over the sensing-list size
// distribution.  p_sense_first: probability the channel is sensed while in
// the sensing list.  p_sense_backup: probability it is sensed during the
// backup stage while backed off.
struct StageSensingProbs {
  double p_sense_first;
  double p_sense_backup;
};

// list_size_dist is indexed 0..channels (probability the sensing list holds
// n of the `channels` channels).  Budget caps both stages.
StageSensingProbs stage_sensing_probabilities(const std::vector<double>& list_size_dist,
                                              double idle_prob, int channels, int budget);

}  // namespace specshape::analysis
