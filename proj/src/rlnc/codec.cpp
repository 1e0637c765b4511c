#include "specshape/rlnc/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace specshape::rlnc {

CodedPacket encode_with_coeffs(const std::vector<std::vector<std::uint32_t>>& sources,
                               std::span<const std::uint32_t> coeffs, const GaloisField& gf) {
  if (sources.empty() || coeffs.size() != sources.size())
    throw std::invalid_argument("coefficient count must match generation size");
  const size_t plen = sources[0].size();
  CodedPacket pkt;
  pkt.coeffs.assign(coeffs.begin(), coeffs.end());
  pkt.payload.assign(plen, 0);
  for (size_t j = 0; j < sources.size(); ++j) {
    if (sources[j].size() != plen) throw std::invalid_argument("ragged source payloads");
    const std::uint32_t c = coeffs[j];
    if (c == 0) continue;
    for (size_t i = 0; i < plen; ++i)
      pkt.payload[i] = gf.add(pkt.payload[i], gf.mul(c, sources[j][i]));
  }
  return pkt;
}

CodedPacket encode_batch(const std::vector<std::vector<std::uint32_t>>& sources,
                         const GaloisField& gf, core::RngStream& rng) {
  std::vector<std::uint32_t> coeffs(sources.size());
  for (auto& c : coeffs) c = gf.sample(rng);
  return encode_with_coeffs(sources, coeffs, gf);
}

DecoderState::DecoderState(const GaloisField& gf, int generation_size, int payload_len)
    : gf_(gf), m_(generation_size), payload_len_(payload_len) {
  if (generation_size < 1 || payload_len < 1)
    throw std::invalid_argument("bad decoder dimensions");
  has_pivot_.assign(m_, false);
  rows_.assign(m_, {});
  row_pay_.assign(m_, {});
}

bool DecoderState::ingest(std::span<const std::uint32_t> coeffs,
                          std::span<const std::uint32_t> payload) {
  if (static_cast<int>(coeffs.size()) != m_)
    throw std::invalid_argument("coefficient vector length mismatch");
  if (static_cast<int>(payload.size()) != payload_len_)
    throw std::invalid_argument("payload length mismatch");

  std::vector<std::uint32_t> c(coeffs.begin(), coeffs.end());
  std::vector<std::uint32_t> p(payload.begin(), payload.end());

  // Reduce by existing pivots, then normalize the first survivor.
  for (int col = 0; col < m_; ++col) {
    if (c[col] == 0 || !has_pivot_[col]) continue;
    const std::uint32_t f = c[col];
    for (int j = 0; j < m_; ++j) c[j] = gf_.sub(c[j], gf_.mul(f, rows_[col][j]));
    for (int i = 0; i < payload_len_; ++i) p[i] = gf_.sub(p[i], gf_.mul(f, row_pay_[col][i]));
  }
  int pivot = -1;
  for (int col = 0; col < m_; ++col) {
    if (c[col] != 0) {
      pivot = col;
      break;
    }
  }
  if (pivot < 0) return false;  // dependent: not innovative

  const std::uint32_t lead_inv = gf_.inv(c[pivot]);
  for (int j = 0; j < m_; ++j) c[j] = gf_.mul(c[j], lead_inv);
  for (int i = 0; i < payload_len_; ++i) p[i] = gf_.mul(p[i], lead_inv);

  // Clear the new pivot column from every stored row to keep RREF.
  for (int col = 0; col < m_; ++col) {
    if (!has_pivot_[col] || rows_[col][pivot] == 0) continue;
    const std::uint32_t f = rows_[col][pivot];
    for (int j = 0; j < m_; ++j) rows_[col][j] = gf_.sub(rows_[col][j], gf_.mul(f, c[j]));
    for (int i = 0; i < payload_len_; ++i)
      row_pay_[col][i] = gf_.sub(row_pay_[col][i], gf_.mul(f, p[i]));
  }

  rows_[pivot] = std::move(c);
  row_pay_[pivot] = std::move(p);
  has_pivot_[pivot] = true;
  ++rank_;
  return true;
}

const std::vector<std::vector<std::uint32_t>>& DecoderState::recovered() const {
  if (!complete()) throw std::logic_error("generation not yet decodable");
  // In RREF at full rank, row i is exactly source i.
  return row_pay_;
}

InnovationEstimate innovation_probability(const GaloisField& gf, int generation_size,
                                          long long samples, core::RngStream& rng) {
  const int m = generation_size;
  if (m < 1) throw std::invalid_argument("generation size must be >= 1");

  // Rank via coefficient-only elimination, no payload needed.
  auto full_rank = [&](const std::vector<std::uint32_t>& flat) {
    DecoderState dec(gf, m, 1);
    std::vector<std::uint32_t> one(1, 0);
    for (int r = 0; r < m; ++r) {
      dec.ingest(std::span<const std::uint32_t>(flat.data() + r * m, m), one);
    }
    return dec.complete();
  };

  const long long cells = static_cast<long long>(m) * m;
  const long long bits = cells * gf.word_bits();
  if (bits <= 20) {  // exhaustive: at most 2^20 matrices
    const long long total = 1LL << bits;
    long long good = 0;
    std::vector<std::uint32_t> flat(cells);
    const std::uint32_t mask = gf.element_mask();
    for (long long code = 0; code < total; ++code) {
      long long c = code;
      for (long long i = 0; i < cells; ++i) {
        flat[i] = static_cast<std::uint32_t>(c) & mask;
        c >>= gf.word_bits();
      }
      good += full_rank(flat);
    }
    return {static_cast<double>(good) / static_cast<double>(total), 0.0, true, total};
  }

  if (samples < 1) throw std::invalid_argument("need at least one sample");
  long long good = 0;
  std::vector<std::uint32_t> flat(cells);
  for (long long s = 0; s < samples; ++s) {
    for (auto& x : flat) x = gf.sample(rng);
    good += full_rank(flat);
  }
  const double p = static_cast<double>(good) / static_cast<double>(samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return {p, se, false, samples};
}

}  // namespace specshape::rlnc
