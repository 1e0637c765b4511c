#include "specshape/analysis/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specshape::analysis {

namespace {

// sum_{d=n+1}^{d_hi} d * P * (1-P)^(d-n-1): printed form of the backup-stage
// cost, with the survival factor for the first n looks kept outside.
double printed_backup_inner(double idle_prob, int n, int d_hi) {
  double sum = 0.0;
  double w = 1.0;
  for (int d = n + 1; d <= d_hi; ++d) {
    sum += d * idle_prob * w;
    w *= 1.0 - idle_prob;
  }
  return sum;
}

}  // namespace

double printed_success_budget_covers(double idle_prob, int channels,
                                     const std::vector<double>& list_size_dist) {
  (void)list_size_dist;  // the printed form does not depend on it
  return any_idle_prob(idle_prob, channels);
}

double printed_success_budget_limited(double idle_prob, int channels, int budget,
                                      const std::vector<double>& list_size_dist) {
  const double busy = 1.0 - idle_prob;
  double p_r = 0.0;
  for (int n = 0; n <= std::min(budget, channels); ++n) {
    p_r += list_size_dist[n] *
           (any_idle_prob(idle_prob, n) + std::pow(busy, n) * any_idle_prob(idle_prob, budget - n));
  }
  for (int n = budget + 1; n <= channels; ++n)
    p_r += list_size_dist[n] * any_idle_prob(idle_prob, budget);
  return p_r;
}

double printed_cost_budget_covers(double idle_prob, int channels,
                                  const std::vector<double>& list_size_dist) {
  const double busy = 1.0 - idle_prob;
  double cost = 0.0;
  for (int n = 0; n <= channels; ++n) {
    const double t1 = scan_cost(idle_prob, 1, n) * any_idle_prob(idle_prob, n);
    const double t2 = printed_backup_inner(idle_prob, n, channels) *
                      any_idle_prob(idle_prob, channels - n) * std::pow(busy, n);
    cost += list_size_dist[n] * (t1 + t2);
  }
  return cost;
}

double printed_cost_budget_limited(double idle_prob, int channels, int budget,
                                   const std::vector<double>& list_size_dist) {
  const double busy = 1.0 - idle_prob;
  double cost = 0.0;
  for (int n = 0; n <= std::min(budget, channels); ++n) {
    const double t1 = scan_cost(idle_prob, 1, n) * any_idle_prob(idle_prob, n);
    const double t2 = printed_backup_inner(idle_prob, n, budget) * std::pow(busy, n) *
                      any_idle_prob(idle_prob, budget - n);
    cost += list_size_dist[n] * (t1 + t2);
  }
  for (int n = budget + 1; n <= channels; ++n) {
    cost += list_size_dist[n] * (scan_cost(idle_prob, 1, budget) * any_idle_prob(idle_prob, budget));
  }
  return cost;
}

double rederived_success_given_list(double idle_prob, int channels, int budget, int list_size) {
  (void)list_size;  // the scan sees min(channels, budget) looks regardless
  return any_idle_prob(idle_prob, std::min(channels, budget));
}

double rederived_cost_given_list(double idle_prob, int channels, int budget, int list_size) {
  const int scan = std::min(channels, budget);
  double cost = scan_cost(idle_prob, 1, std::min(list_size, scan));
  if (list_size < scan) cost += scan_cost(idle_prob, list_size + 1, scan);
  return cost;
}

SuThroughputReport su_throughput_adaptive(double idle_prob, int channels, int budget,
                                          const AdaptiveFixedPoint& fp, FormulaMode mode) {
  if (channels < 1 || budget < 1) throw std::invalid_argument("bad sensing inputs");
  if (!(idle_prob >= 0.0 && idle_prob <= 1.0))
    throw std::invalid_argument("idle_prob out of range [0, 1]");
  if (static_cast<int>(fp.list_size_dist.size()) != channels + 1)
    throw std::invalid_argument("fixed point does not match channel count");

  const auto& dist = fp.list_size_dist;
  double p_r, cost;
  if (mode == FormulaMode::AsPrinted) {
    if (budget >= channels) {
      p_r = printed_success_budget_covers(idle_prob, channels, dist);
      cost = printed_cost_budget_covers(idle_prob, channels, dist);
    } else {
      p_r = printed_success_budget_limited(idle_prob, channels, budget, dist);
      cost = printed_cost_budget_limited(idle_prob, channels, budget, dist);
    }
  } else {
    p_r = 0.0;
    cost = 0.0;
    for (int n = 0; n <= channels; ++n) {
      p_r += dist[n] * rederived_success_given_list(idle_prob, channels, budget, n);
      cost += dist[n] * rederived_cost_given_list(idle_prob, channels, budget, n);
    }
  }
  return {p_r, cost, budget * p_r - cost,
          budget >= channels ? BudgetRegime::BudgetCoversAll : BudgetRegime::BudgetLimited, mode};
}

SuThroughputReport su_throughput_adaptive(double idle_prob, int channels, int budget, int backoff,
                                          FormulaMode mode, double tol, int max_iter) {
  const auto fp = solve_adaptive_fixed_point(idle_prob, channels, budget, backoff, tol, max_iter);
  return su_throughput_adaptive(idle_prob, channels, budget, fp, mode);
}

}  // namespace specshape::analysis
