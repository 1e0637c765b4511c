#include "specshape/analysis/backoff.hpp"

#include <cmath>
#include <stdexcept>

#include "specshape/analysis/completion_time.hpp"
#include "specshape/analysis/fixed_point.hpp"

namespace specshape::analysis {

double prediction_distance(double list_prob, double idle_prob) {
  return std::fabs(list_prob - idle_prob);
}

BackoffSearch optimal_backoff(double idle_prob, int channels, int budget, int k_max, double tol,
                              int max_iter) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  BackoffSearch out;
  out.distance_curve.reserve(k_max + 1);
  out.best_backoff = 0;
  for (int k = 0; k <= k_max; ++k) {
    const auto fp = solve_adaptive_fixed_point(idle_prob, channels, budget, k, tol, max_iter);
    out.distance_curve.push_back(fp.prediction_gap);
    if (fp.prediction_gap < out.distance_curve[out.best_backoff]) out.best_backoff = k;
  }
  return out;
}

namespace {

int round_half_even(double x) {
  const double f = std::floor(x);
  const double r = x - f;
  if (r > 0.5) return static_cast<int>(f) + 1;
  if (r < 0.5) return static_cast<int>(f);
  const long long fi = static_cast<long long>(f);
  return static_cast<int>(fi % 2 == 0 ? fi : fi + 1);
}

}  // namespace

int recommended_backoff(int batch_size, int receivers, double erasure_prob) {
  return round_half_even(expected_completion_time_nc(batch_size, receivers, erasure_prob) / 2.0);
}

}  // namespace specshape::analysis
