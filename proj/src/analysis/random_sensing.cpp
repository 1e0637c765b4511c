#include "specshape/analysis/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specshape::analysis {

double any_idle_prob(double idle_prob, int scan_len) {
  return 1.0 - std::pow(1.0 - idle_prob, scan_len);
}

double scan_cost(double idle_prob, int d_lo, int d_hi) {
  double sum = 0.0;
  double w = std::pow(1.0 - idle_prob, d_lo - 1);  // (1-P)^(d-1) at d = d_lo
  for (int d = d_lo; d <= d_hi; ++d) {
    sum += d * idle_prob * w;
    w *= 1.0 - idle_prob;
  }
  return sum;
}

SuThroughputReport su_throughput_random(double idle_prob, int channels, int budget,
                                        FormulaMode mode) {
  if (channels < 1 || budget < 1) throw std::invalid_argument("bad sensing inputs");
  if (!(idle_prob >= 0.0 && idle_prob <= 1.0))
    throw std::invalid_argument("idle_prob out of range [0, 1]");

  const int scan = std::min(channels, budget);
  const double p_r = any_idle_prob(idle_prob, scan);
  const double core = scan_cost(idle_prob, 1, scan);
  const double cost = mode == FormulaMode::Rederived ? core : core * p_r;
  return {p_r, cost, budget * p_r - cost,
          budget >= channels ? BudgetRegime::BudgetCoversAll : BudgetRegime::BudgetLimited, mode};
}

}  // namespace specshape::analysis
