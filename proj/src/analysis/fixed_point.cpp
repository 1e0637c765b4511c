#include "specshape/analysis/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

#include "specshape/analysis/errors.hpp"

namespace specshape::analysis {

std::vector<double> binomial_pmf(int trials, double p) {
  std::vector<double> pmf(trials + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[trials] = 1.0;
    return pmf;
  }
  const double lg_all = std::lgamma(trials + 1.0);
  for (int n = 0; n <= trials; ++n) {
    const double lg = lg_all - std::lgamma(n + 1.0) - std::lgamma(trials - n + 1.0) +
                      n * std::log(p) + (trials - n) * std::log1p(-p);
    pmf[n] = std::exp(lg);
  }
  return pmf;
}

double adaptive_map(double list_prob, double idle_prob, int channels, int budget, int backoff) {
  const auto dist = binomial_pmf(channels, list_prob);
  const auto sp = stage_sensing_probabilities(dist, idle_prob, channels, budget);
  return timer_stationary_distribution(backoff, idle_prob, sp.p_sense_first, sp.p_sense_backup)
      .list_prob();
}

AdaptiveFixedPoint solve_adaptive_fixed_point(double idle_prob, int channels, int budget,
                                              int backoff, double tol, int max_iter, double start,
                                              double damping) {
  if (channels < 1 || budget < 1 || backoff < 0)
    throw std::invalid_argument("bad fixed-point inputs");
  if (!(idle_prob >= 0.0 && idle_prob <= 1.0))
    throw std::invalid_argument("idle_prob out of range [0, 1]");

  auto assemble = [&](double x, int iters) {
    AdaptiveFixedPoint fp;
    fp.list_prob = x;
    fp.list_size_dist = binomial_pmf(channels, x);
    const auto sp = stage_sensing_probabilities(fp.list_size_dist, idle_prob, channels, budget);
    fp.p_sense_first = sp.p_sense_first;
    fp.p_sense_backup = sp.p_sense_backup;
    fp.timer_dist =
        timer_stationary_distribution(backoff, idle_prob, sp.p_sense_first, sp.p_sense_backup).pi;
    fp.prediction_gap = std::fabs(x - idle_prob);
    fp.iterations = iters;
    return fp;
  };

  // No backoff: every timer is pinned at 0, the list always holds all
  // channels, and no iteration is needed.
  if (backoff == 0) return assemble(1.0, 0);

  double x = start;
  double residual = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const double tx = adaptive_map(x, idle_prob, channels, budget, backoff);
    residual = std::fabs(x - tx);
    if (residual < tol) return assemble(x, iter);
    x = (1.0 - damping) * x + damping * tx;
  }
  throw NoConvergence(max_iter, residual);
}

}  // namespace specshape::analysis
