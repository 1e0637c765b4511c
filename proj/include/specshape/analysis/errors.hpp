#pragma once

#include <stdexcept>
#include <string>

namespace specshape::analysis {

// Arrival rate at or above the channel's sustainable throughput: the queue
// has no stationary distribution and idle-probability formulas are invalid.
class UnstableRegime : public std::runtime_error {
 public:
  UnstableRegime(double arrival_rate, double max_stable_throughput)
      : std::runtime_error("unstable regime: arrival_rate " + std::to_string(arrival_rate) +
                           " >= max stable throughput " + std::to_string(max_stable_throughput)),
        arrival_rate_(arrival_rate),
        max_stable_throughput_(max_stable_throughput) {}

  double arrival_rate() const { return arrival_rate_; }
  double max_stable_throughput() const { return max_stable_throughput_; }

 private:
  double arrival_rate_;
  double max_stable_throughput_;
};

// Fixed-point iteration ran out of iterations before meeting tolerance.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(int iterations, double residual)
      : std::runtime_error("fixed point did not converge after " + std::to_string(iterations) +
                           " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace specshape::analysis
