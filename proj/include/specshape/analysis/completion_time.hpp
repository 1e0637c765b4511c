#pragma once

namespace specshape::analysis {

// Expected slots to finish one coded generation: every one of `receivers`
// listeners must collect `batch_size` packets through independent
// Bernoulli(1 - erasure_prob) receptions.  Infinite tail series truncated
// once the per-term bound receivers * (1 - F(t)) drops below tail_tol.
double expected_completion_time_nc(int batch_size, int receivers, double erasure_prob,
                                   double tail_tol = 1e-12);

// Expected slots to deliver a single uncoded packet to every receiver
// (retransmit until the slowest one has it).  Independent implementation;
// must agree with expected_completion_time_nc(1, ...) to float precision.
double expected_completion_time_arq(int receivers, double erasure_prob,
                                    double tail_tol = 1e-12);

}  // namespace specshape::analysis
