#pragma once

namespace specshape::analysis {

// Exact stationary probability that a given channel's backoff timer is 0
// under the two-stage adaptive policy with i.i.d. Bernoulli(idle_prob)
// channel occupancy.  Enumerates the full joint timer chain over all
// (backoff+1)^channels states, idle patterns and scan orders, then solves
// the stationary equations directly.  Exponential in channels; intended as
// a small-instance oracle for the averaged single-channel approximation
// (channels <= 3, backoff <= 3 stays well under a hundred states).
double exact_joint_list_prob(int channels, int budget, int backoff, double idle_prob);

}  // namespace specshape::analysis
