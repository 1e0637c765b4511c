#pragma once

#include <vector>

namespace specshape::analysis {

// How far the adaptive scheme's stationary list probability sits from the
// channel idle probability it is trying to track.
double prediction_distance(double list_prob, double idle_prob);

// Grid search over backoff values 0..k_max minimizing the prediction
// distance at the solved fixed point; ties go to the smallest value.
struct BackoffSearch {
  int best_backoff;
  std::vector<double> distance_curve;  // index = backoff value
};

BackoffSearch optimal_backoff(double idle_prob, int channels, int budget, int k_max,
                              double tol = 1e-10, int max_iter = 10000);

// Half the expected generation completion time, rounded half-to-even: the
// rule-of-thumb timer value recommended alongside the grid search.
int recommended_backoff(int batch_size, int receivers, double erasure_prob);

}  // namespace specshape::analysis
