#include "specshape/analysis/timer_chain.hpp"

#include <cmath>
#include <stdexcept>

namespace specshape::analysis {

namespace {

void check_inputs(int backoff, double idle_prob, double p_sense_first, double p_sense_backup) {
  if (backoff < 0) throw std::invalid_argument("backoff must be >= 0");
  if (!(idle_prob >= 0.0 && idle_prob <= 1.0) || !(p_sense_first >= 0.0 && p_sense_first <= 1.0) ||
      !(p_sense_backup >= 0.0 && p_sense_backup <= 1.0))
    throw std::invalid_argument("probabilities out of range [0, 1]");
}

}  // namespace

TimerChain timer_stationary_distribution(int backoff, double idle_prob, double p_sense_first,
                                         double p_sense_backup) {
  check_inputs(backoff, idle_prob, p_sense_first, p_sense_backup);
  const int k = backoff;
  if (k == 0) return {{1.0}};

  // Unnormalized weights u relative to u[0] = 1: the chain enters k at rate
  // p_sense_first * (1-P) from state 0, then survives each downward step
  // with probability beta = 1 - p_sense_backup * P (otherwise the backup
  // stage finds the channel idle and resets it to 0).
  const double beta = 1.0 - p_sense_backup * idle_prob;
  std::vector<double> u(k + 1, 0.0);
  u[0] = 1.0;
  u[k] = p_sense_first * (1.0 - idle_prob);
  for (int i = k - 1; i >= 1; --i) u[i] = u[i + 1] * beta;

  double norm = 0.0;
  for (double w : u) norm += w;
  TimerChain chain;
  chain.pi.resize(k + 1);
  for (int i = 0; i <= k; ++i) chain.pi[i] = u[i] / norm;
  return chain;
}

double timer_list_prob_closed_form(int backoff, double idle_prob, double p_sense_first,
                                   double p_sense_backup) {
  check_inputs(backoff, idle_prob, p_sense_first, p_sense_backup);
  const int k = backoff;
  if (k == 0) return 1.0;
  const double hit = p_sense_backup * idle_prob;  // leaves the countdown early
  const double beta = 1.0 - hit;
  // geom = sum_{j=1}^{k-1} beta^j, evaluated as a limit when hit ~ 0.
  double geom;
  if (hit < 1e-9) {
    geom = 0.0;
    double bj = 1.0;
    for (int j = 1; j <= k - 1; ++j) {
      bj *= beta;
      geom += bj;
    }
  } else {
    geom = beta * (1.0 - std::pow(beta, k - 1)) / hit;
  }
  return 1.0 / (1.0 + p_sense_first * (1.0 - idle_prob) * (1.0 + geom));
}

}  // namespace specshape::analysis
