#include "specshape/sim/pu_channel.hpp"

#include <stdexcept>

namespace specshape::sim {

namespace {

int field_word_bits(std::uint64_t q) {
  switch (q) {
    case 2: return 1;
    case 16: return 4;
    case 256: return 8;
    case 65536: return 16;
    default:
      throw core::ConfigError(
          {"payload-level service needs field_size in {2, 16, 256, 65536}"});
  }
}

}  // namespace

PuChannel::PuChannel(const core::NetworkConfig& cfg, ServiceRealism realism, int payload_elems)
    : cfg_(cfg), realism_(realism), payload_elems_(payload_elems),
      m_eff_(cfg.effective_batch_size()) {
  st_.receiver_progress.assign(cfg.num_receivers, 0);
  if (realism_ == ServiceRealism::RlncPayload) {
    if (cfg.pu_mode == core::PuMode::Arq)
      throw core::ConfigError({"payload-level service applies to network_coding mode only"});
    if (payload_elems_ < 1) throw core::ConfigError({"payload_elems must be >= 1"});
    gf_ = std::make_unique<rlnc::GaloisField>(field_word_bits(cfg.field_size));
  }
}

void PuChannel::start_service_if_ready(core::RngStream& rng) {
  if (st_.serving || st_.queue_len < m_eff_) return;
  st_.queue_len -= m_eff_;
  st_.in_service = m_eff_;
  st_.serving = true;
  std::fill(st_.receiver_progress.begin(), st_.receiver_progress.end(), 0);
  if (realism_ == ServiceRealism::RlncPayload) {
    sources_.assign(m_eff_, std::vector<std::uint32_t>(payload_elems_));
    for (auto& s : sources_)
      for (auto& x : s) x = gf_->sample(rng);
    decoders_.clear();
    decoders_.reserve(cfg_.num_receivers);
    for (int j = 0; j < cfg_.num_receivers; ++j)
      decoders_.emplace_back(*gf_, m_eff_, payload_elems_);
  }
}

bool PuChannel::receivers_done() const {
  if (realism_ == ServiceRealism::RlncPayload) {
    for (const auto& d : decoders_)
      if (!d.complete()) return false;
    return true;
  }
  for (int p : st_.receiver_progress)
    if (p < m_eff_) return false;
  return true;
}

PuChannel::SlotResult PuChannel::step(core::RngStream& rng) {
  // 1. Arrival.
  if (rng.bernoulli(cfg_.arrival_rate)) {
    ++st_.queue_len;
    ++arrived_;
  }
  // 2. Service start (a generation started now transmits this very slot).
  start_service_if_ready(rng);

  SlotResult out;
  if (!st_.serving) {
    check_conservation();
    return out;
  }
  out.busy = true;

  // 3. One broadcast transmission; independent erasures per receiver.
  if (realism_ == ServiceRealism::RlncPayload) {
    const rlnc::CodedPacket pkt = rlnc::encode_batch(sources_, *gf_, rng);
    for (int j = 0; j < cfg_.num_receivers; ++j) {
      if (decoders_[j].complete()) continue;
      if (!rng.bernoulli(cfg_.erasure_prob)) {
        decoders_[j].ingest(pkt);
        st_.receiver_progress[j] = decoders_[j].rank();
      }
    }
  } else {
    for (int j = 0; j < cfg_.num_receivers; ++j) {
      if (st_.receiver_progress[j] >= m_eff_) continue;
      if (!rng.bernoulli(cfg_.erasure_prob)) ++st_.receiver_progress[j];
    }
  }

  // 4. Completion at the slot boundary.
  if (receivers_done()) {
    if (realism_ == ServiceRealism::RlncPayload && verified_generations_ < 2) {
      // Spot-check that decoding really returned the source payloads.
      for (const auto& d : decoders_)
        if (d.recovered() != sources_) throw std::logic_error("decoded payload mismatch");
      ++verified_generations_;
    }
    out.delivered = st_.in_service;
    delivered_ += st_.in_service;
    st_.in_service = 0;
    st_.serving = false;
  }
  check_conservation();
  return out;
}

void PuChannel::check_conservation() const {
  if (arrived_ != delivered_ + st_.queue_len + st_.in_service)
    throw std::logic_error("packet conservation violated");
}

long long sample_completion_time(int batch_size, int receivers, double erasure_prob,
                                 core::RngStream& rng, ServiceRealism realism,
                                 std::uint64_t field_size, int payload_elems) {
  long long slots = 0;
  if (realism == ServiceRealism::RlncPayload) {
    rlnc::GaloisField gf(field_word_bits(field_size));
    std::vector<std::vector<std::uint32_t>> sources(batch_size,
                                                    std::vector<std::uint32_t>(payload_elems));
    for (auto& s : sources)
      for (auto& x : s) x = gf.sample(rng);
    std::vector<rlnc::DecoderState> decs;
    decs.reserve(receivers);
    for (int j = 0; j < receivers; ++j) decs.emplace_back(gf, batch_size, payload_elems);
    int done = 0;
    while (done < receivers) {
      ++slots;
      const rlnc::CodedPacket pkt = rlnc::encode_batch(sources, gf, rng);
      for (auto& d : decs) {
        if (d.complete()) continue;
        if (!rng.bernoulli(erasure_prob)) {
          d.ingest(pkt);
          if (d.complete()) ++done;
        }
      }
    }
    return slots;
  }

  std::vector<int> progress(receivers, 0);
  int done = 0;
  while (done < receivers) {
    ++slots;
    for (int j = 0; j < receivers; ++j) {
      if (progress[j] >= batch_size) continue;
      if (!rng.bernoulli(erasure_prob)) {
        if (++progress[j] == batch_size) ++done;
      }
    }
  }
  return slots;
}

}  // namespace specshape::sim
