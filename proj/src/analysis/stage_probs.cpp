#include "specshape/analysis/stage_probs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specshape::analysis {

StageSensingProbs stage_sensing_probabilities(const std::vector<double>& list_size_dist,
                                              double idle_prob, int channels, int budget) {
  const int n_max = channels;
  if (static_cast<int>(list_size_dist.size()) != n_max + 1)
    throw std::invalid_argument("list_size_dist must have channels+1 entries");
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  const double busy = 1.0 - idle_prob;
  const int scan = std::min(budget, channels);

  // Tagged channel in the sensing list of size n: it is sensed unless the
  // scan stops earlier, i.e. some other listed channel is found idle first
  // or the budget runs out.  Condition on x listed channels sensed (busy)
  // before the tagged one.
  double p_first = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    if (list_size_dist[n] == 0.0) continue;
    double inner = 0.0;
    double not_picked = 1.0;  // prob tagged not among the first x picks
    double busy_x = 1.0;      // (1-P)^x
    const int x_max = std::min(budget, n) - 1;
    for (int x = 0; x <= x_max; ++x) {
      inner += not_picked * busy_x / (n - x);
      not_picked *= 1.0 - 1.0 / static_cast<double>(n - x);
      busy_x *= busy;
    }
    p_first += list_size_dist[n] * inner;
  }

  // Tagged channel backed off while the list has size n: the backup stage
  // runs only if all n listed channels were sensed busy, and reaches the
  // tagged channel after y other backed-off channels, all busy.
  double p_backup = 0.0;
  for (int n = 0; n <= scan - 1; ++n) {
    if (list_size_dist[n] == 0.0) continue;
    double inner = 0.0;
    double not_picked = 1.0;
    double busy_y = 1.0;
    const int y_max = scan - n - 1;
    for (int y = 0; y <= y_max; ++y) {
      inner += not_picked * busy_y / (channels - n - y);
      not_picked *= 1.0 - 1.0 / static_cast<double>(channels - n - y);
      busy_y *= busy;
    }
    p_backup += std::pow(busy, n) * list_size_dist[n] * inner;
  }

  // Both are probabilities; summation rounding can land an ulp outside.
  return {std::clamp(p_first, 0.0, 1.0), std::clamp(p_backup, 0.0, 1.0)};
}

}  // namespace specshape::analysis
