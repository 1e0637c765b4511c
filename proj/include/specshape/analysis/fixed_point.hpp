#pragma once

#include <vector>

#include "specshape/analysis/stage_probs.hpp"
#include "specshape/analysis/timer_chain.hpp"

namespace specshape::analysis {

// Self-consistent solution of the adaptive-sensing model: the probability a
// channel sits in the sensing list feeds the list-size distribution, which
// feeds the stage sensing probabilities, which feed the timer chain, which
// must reproduce the same list probability.
struct AdaptiveFixedPoint {
  double list_prob;                    // stationary P(timer == 0)
  double p_sense_first;
  double p_sense_backup;
  std::vector<double> list_size_dist;  // 0..channels, binomial in list_prob
  std::vector<double> timer_dist;      // 0..backoff
  double prediction_gap;               // |list_prob - idle_prob|
  int iterations;
};

// Binomial pmf over {0..trials}; exact point mass at p == 0 or 1.
std::vector<double> binomial_pmf(int trials, double p);

// One application of the fixed-point map T at the given list probability.
double adaptive_map(double list_prob, double idle_prob, int channels, int budget, int backoff);

// Damped iteration x <- (1-damping) x + damping T(x).  Throws NoConvergence
// if |x - T(x)| never drops below tol.  backoff == 0 short-circuits to the
// exact all-listed solution.
AdaptiveFixedPoint solve_adaptive_fixed_point(double idle_prob, int channels, int budget,
                                              int backoff, double tol = 1e-10,
                                              int max_iter = 10000, double start = 0.5,
                                              double damping = 0.5);

}  // namespace specshape::analysis
