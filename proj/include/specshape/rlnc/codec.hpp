#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specshape/rlnc/gf.hpp"

namespace specshape::rlnc {

// One coded packet: the random combination coefficients plus the combined
// payload, both as field elements.
struct CodedPacket {
  std::vector<std::uint32_t> coeffs;
  std::vector<std::uint32_t> payload;
};

// Draws uniform coefficients (zero allowed) over the whole generation and
// emits the matching linear combination of the source payloads.
CodedPacket encode_batch(const std::vector<std::vector<std::uint32_t>>& sources,
                         const GaloisField& gf, core::RngStream& rng);

// Deterministic variant used by tests and the vector files.
CodedPacket encode_with_coeffs(const std::vector<std::vector<std::uint32_t>>& sources,
                               std::span<const std::uint32_t> coeffs, const GaloisField& gf);

// Incremental Gaussian-elimination decoder.  Maintains a reduced
// row-echelon system; a packet is innovative iff it raises the rank.
class DecoderState {
 public:
  DecoderState(const GaloisField& gf, int generation_size, int payload_len);

  // Returns true iff the packet was innovative.  Rejects coefficient
  // vectors of the wrong length.
  bool ingest(std::span<const std::uint32_t> coeffs, std::span<const std::uint32_t> payload);
  bool ingest(const CodedPacket& pkt) { return ingest(pkt.coeffs, pkt.payload); }

  int rank() const { return rank_; }
  int generation_size() const { return m_; }
  bool complete() const { return rank_ == m_; }

  // Decoded source payloads, in generation order; valid once complete().
  const std::vector<std::vector<std::uint32_t>>& recovered() const;

 private:
  const GaloisField& gf_;
  int m_;
  int payload_len_;
  int rank_ = 0;
  // Row i, when present, has pivot column i with coefficient 1 and zeros in
  // every other pivot column (RREF maintained incrementally).
  std::vector<bool> has_pivot_;
  std::vector<std::vector<std::uint32_t>> rows_;     // coefficient part
  std::vector<std::vector<std::uint32_t>> row_pay_;  // payload part
};

struct InnovationEstimate {
  double prob;      // P(random generation of m packets decodes)
  double std_err;   // 0 for the exact path
  bool exact;
  long long samples;  // matrices examined
};

// Probability that m independently drawn coefficient vectors form a full-
// rank m x m matrix.  Exhaustive when q^(m^2) is small, Monte Carlo with a
// standard error otherwise.
InnovationEstimate innovation_probability(const GaloisField& gf, int generation_size,
                                          long long samples, core::RngStream& rng);

}  // namespace specshape::rlnc
