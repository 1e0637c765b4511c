#include "specshape/analysis/pu_profile.hpp"

#include "specshape/analysis/completion_time.hpp"

namespace specshape::analysis {

ChannelOccupancyProfile pu_profile(const core::NetworkConfig& cfg, double tail_tol) {
  const int m_eff = cfg.effective_batch_size();
  double service;
  if (cfg.pu_mode == core::PuMode::NetworkCoding) {
    service = expected_completion_time_nc(cfg.batch_size, cfg.num_receivers, cfg.erasure_prob,
                                          tail_tol);
  } else {
    service = expected_completion_time_arq(cfg.num_receivers, cfg.erasure_prob, tail_tol);
  }
  const double max_tput = m_eff / service;
  if (!(cfg.arrival_rate < max_tput)) throw UnstableRegime(cfg.arrival_rate, max_tput);
  // Busy fraction is (arrivals per slot) * (busy slots per packet).
  const double idle = 1.0 - cfg.arrival_rate * service / m_eff;
  return {cfg.pu_mode, m_eff, service, max_tput, idle};
}

}  // namespace specshape::analysis
