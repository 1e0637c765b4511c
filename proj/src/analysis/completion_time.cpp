#include "specshape/analysis/completion_time.hpp"

#include <cmath>
#include <stdexcept>

namespace specshape::analysis {

namespace {
// Generous cap on series length; the stop rule fires long before this for
// any sane (epsilon, tol).  Hitting it means the inputs were out of contract.
constexpr long long kMaxTerms = 100'000'000;
}  // namespace

double expected_completion_time_nc(int batch_size, int receivers, double erasure_prob,
                                   double tail_tol) {
  if (batch_size < 1 || receivers < 1) throw std::invalid_argument("bad completion-time inputs");
  if (!(erasure_prob >= 0.0 && erasure_prob < 1.0))
    throw std::invalid_argument("erasure_prob out of range [0, 1)");

  const double m = batch_size;
  if (erasure_prob == 0.0) return m;  // every slot delivers; exactly m slots

  // F(t) = P(one receiver done by slot t): negative-binomial CDF.  Walk the
  // pmf with the term recurrence and accumulate sum_t [1 - F(t)^L].
  double term = std::pow(1.0 - erasure_prob, batch_size);  // pmf at t = m
  double cdf = term;
  double sum = 0.0;
  long long t = batch_size;
  while (true) {
    sum += 1.0 - std::pow(cdf, receivers);
    if (receivers * (1.0 - cdf) < tail_tol) break;
    term *= erasure_prob * static_cast<double>(t) / static_cast<double>(t - batch_size + 1);
    cdf += term;
    if (cdf > 1.0) cdf = 1.0;
    ++t;
    if (t - batch_size > kMaxTerms) throw std::runtime_error("completion-time series stalled");
  }
  return m + sum;
}

double expected_completion_time_arq(int receivers, double erasure_prob, double tail_tol) {
  if (receivers < 1) throw std::invalid_argument("bad completion-time inputs");
  if (!(erasure_prob >= 0.0 && erasure_prob < 1.0))
    throw std::invalid_argument("erasure_prob out of range [0, 1)");
  if (erasure_prob == 0.0) return 1.0;

  // E[max of L geometrics] = 1 + sum_{t>=1} [1 - (1 - eps^t)^L].
  double sum = 0.0;
  double eps_t = erasure_prob;
  long long t = 1;
  while (true) {
    sum += 1.0 - std::pow(1.0 - eps_t, receivers);
    if (receivers * eps_t < tail_tol) break;
    eps_t *= erasure_prob;
    ++t;
    if (t > kMaxTerms) throw std::runtime_error("completion-time series stalled");
  }
  return 1.0 + sum;
}

}  // namespace specshape::analysis
