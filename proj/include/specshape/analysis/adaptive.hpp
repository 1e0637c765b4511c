#pragma once

#include <vector>

#include "specshape/analysis/fixed_point.hpp"
#include "specshape/analysis/sensing.hpp"

namespace specshape::analysis {

// Secondary-user throughput under two-stage adaptive sensing, evaluated at
// a solved fixed point.  The AsPrinted branch functions are exposed
// individually so the two budget regimes can be checked against each other
// at the boundary budget == channels.
SuThroughputReport su_throughput_adaptive(double idle_prob, int channels, int budget,
                                          const AdaptiveFixedPoint& fp,
                                          FormulaMode mode = FormulaMode::Rederived);

// Convenience overload: solves the fixed point first.
SuThroughputReport su_throughput_adaptive(double idle_prob, int channels, int budget, int backoff,
                                          FormulaMode mode = FormulaMode::Rederived,
                                          double tol = 1e-10, int max_iter = 10000);

// AsPrinted closed-form families (list_size_dist indexed 0..channels).
double printed_success_budget_covers(double idle_prob, int channels,
                                     const std::vector<double>& list_size_dist);
double printed_success_budget_limited(double idle_prob, int channels, int budget,
                                      const std::vector<double>& list_size_dist);
double printed_cost_budget_covers(double idle_prob, int channels,
                                  const std::vector<double>& list_size_dist);
double printed_cost_budget_limited(double idle_prob, int channels, int budget,
                                   const std::vector<double>& list_size_dist);

// Rederived per-list-size conditional pieces (shared with the invariants
// tests): success probability and sensing cost given list size n.
double rederived_success_given_list(double idle_prob, int channels, int budget, int list_size);
double rederived_cost_given_list(double idle_prob, int channels, int budget, int list_size);

}  // namespace specshape::analysis
