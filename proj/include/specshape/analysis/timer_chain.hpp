#pragma once

#include <vector>

namespace specshape::analysis {

// Stationary distribution of one channel's backoff timer (states 0..k)
// under given per-slot sensing probabilities.  State 0 = in the sensing
// list; a busy first-stage sense resets the timer to k; a backed-off
// channel found idle by the backup stage jumps straight back to 0.
struct TimerChain {
  std::vector<double> pi;  // stationary probabilities, index = timer value

  double list_prob() const { return pi[0]; }
};

// Built from the balance equations; exact up to float rounding.
TimerChain timer_stationary_distribution(int backoff, double idle_prob, double p_sense_first,
                                         double p_sense_backup);

// Independent closed-form evaluation of pi[0]; switches to the series
// limit when p_sense_backup * idle_prob vanishes (removable singularity).
double timer_list_prob_closed_form(int backoff, double idle_prob, double p_sense_first,
                                   double p_sense_backup);

}  // namespace specshape::analysis
