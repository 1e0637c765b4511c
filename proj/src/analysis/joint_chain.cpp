#include "specshape/analysis/joint_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace specshape::analysis {

namespace {

// pi * P = pi with sum(pi) = 1, by dense Gaussian elimination on the
// transposed system.  `trans` is row-major: trans[s][s2] = P(s -> s2).
std::vector<double> stationary(const std::vector<std::vector<double>>& trans) {
  const int n = static_cast<int>(trans.size());
  // A = P^T - I, last equation replaced by normalization.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = trans[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (std::fabs(a[col][col]) < 1e-300) throw std::runtime_error("singular joint chain");
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> pi(n);
  for (int i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  return pi;
}

void permutations(std::vector<int> v, std::vector<std::vector<int>>& out) {
  std::sort(v.begin(), v.end());
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace

double exact_joint_list_prob(int channels, int budget, int backoff, double idle_prob) {
  if (channels < 1 || channels > 3 || backoff < 0 || backoff > 3 || budget < 1)
    throw std::invalid_argument("exact joint chain limited to channels <= 3, backoff <= 3");
  if (!(idle_prob >= 0.0 && idle_prob <= 1.0))
    throw std::invalid_argument("idle_prob out of range [0, 1]");
  if (backoff == 0) return 1.0;

  const int n_ch = channels;
  const int base = backoff + 1;
  int n_states = 1;
  for (int i = 0; i < n_ch; ++i) n_states *= base;

  auto digit = [&](int state, int ch) {
    for (int i = 0; i < ch; ++i) state /= base;
    return state % base;
  };

  std::vector<std::vector<double>> trans(n_states, std::vector<double>(n_states, 0.0));

  std::vector<int> timers(n_ch);
  for (int s = 0; s < n_states; ++s) {
    for (int c = 0; c < n_ch; ++c) timers[c] = digit(s, c);
    std::vector<int> listed, backed;
    for (int c = 0; c < n_ch; ++c) (timers[c] == 0 ? listed : backed).push_back(c);

    std::vector<std::vector<int>> perms1, perms2;
    permutations(listed, perms1);
    permutations(backed, perms2);
    const double w_perm = 1.0 / (perms1.size() * perms2.size());

    for (int mask = 0; mask < (1 << n_ch); ++mask) {
      double w_mask = 1.0;
      for (int c = 0; c < n_ch; ++c)
        w_mask *= (mask >> c & 1) ? idle_prob : 1.0 - idle_prob;
      if (w_mask == 0.0) continue;

      for (const auto& p1 : perms1) {
        for (const auto& p2 : perms2) {
          // Walk the slot: first stage over the list, then (if the whole
          // list was sensed busy and budget remains) the backup stage.
          int left = budget;
          bool success = false;
          int reset_to_zero = -1;
          std::vector<char> sensed_busy_first(n_ch, 0);
          size_t scanned = 0;
          for (int c : p1) {
            if (left == 0) break;
            --left;
            ++scanned;
            if (mask >> c & 1) {
              success = true;
              break;
            }
            sensed_busy_first[c] = 1;
          }
          if (!success && scanned == p1.size() && left > 0) {
            for (int c : p2) {
              if (left == 0) break;
              --left;
              if (mask >> c & 1) {
                reset_to_zero = c;
                break;
              }
            }
          }

          int s2 = 0;
          int mult = 1;
          for (int c = 0; c < n_ch; ++c) {
            int t = timers[c] > 0 ? timers[c] - 1 : 0;
            if (sensed_busy_first[c]) t = backoff;
            if (c == reset_to_zero) t = 0;
            s2 += t * mult;
            mult *= base;
          }
          trans[s][s2] += w_mask * w_perm;
        }
      }
    }
  }

  const auto pi = stationary(trans);
  double p0 = 0.0;
  for (int s = 0; s < n_states; ++s)
    if (digit(s, 0) == 0) p0 += pi[s];
  return p0;
}

}  // namespace specshape::analysis
