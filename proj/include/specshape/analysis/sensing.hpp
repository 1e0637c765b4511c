#pragma once

namespace specshape::analysis {

// Two published forms of the secondary-user throughput expressions are kept
// side by side.  AsPrinted evaluates the displayed closed forms verbatim
// (their sensing-cost terms carry an extra success-probability factor);
// Rederived evaluates the first-idle-position expectation directly.
// Rederived is the default everywhere and is the form the simulator
// reproduces.
enum class FormulaMode { AsPrinted, Rederived };

// Whether the per-slot budget covers the whole channel set.
enum class BudgetRegime { BudgetCoversAll, BudgetLimited };

struct SuThroughputReport {
  double success_prob;           // P(SU finds an idle channel in a slot)
  double expected_sensing_cost;  // E[mini-slots sensed, counted on success]
  double throughput;             // expected tx mini-slots per slot
  BudgetRegime regime;
  FormulaMode formula_mode;
};

// P(at least one idle among `scan_len` independent looks), 1 - (1-P)^len.
double any_idle_prob(double idle_prob, int scan_len);

// sum_{d=d_lo}^{d_hi} d * P * (1-P)^(d-1): mini-slots spent when the first
// idle channel sits at scan position d, accumulated over a position range.
double scan_cost(double idle_prob, int d_lo, int d_hi);

// Memoryless baseline: scan channels in uniform random order until the
// first idle one, up to min(channels, budget) looks.
SuThroughputReport su_throughput_random(double idle_prob, int channels, int budget,
                                        FormulaMode mode = FormulaMode::Rederived);

}  // namespace specshape::analysis
