#pragma once

#include <cstdint>

#include "specshape/core/rng.hpp"

namespace specshape::rlnc {

// GF(2^w) for w in {1, 4, 8, 16}: shift-and-add (carry-less) multiplication
// reduced by a fixed irreducible polynomial per width.  No log/exp tables,
// so correctness does not depend on any generator being primitive.
class GaloisField {
 public:
  explicit GaloisField(int word_bits);

  int word_bits() const { return w_; }
  std::uint32_t order() const { return 1u << w_; }
  std::uint32_t reduction_poly() const { return poly_; }  // includes the x^w term
  std::uint32_t element_mask() const { return order() - 1; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a ^ b; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0;
    const std::uint32_t carry = 1u << w_;
    while (b) {
      if (b & 1u) r ^= a;
      b >>= 1;
      a <<= 1;
      if (a & carry) a ^= poly_;
    }
    return r;
  }

  std::uint32_t inv(std::uint32_t a) const;  // a != 0
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }

  std::uint32_t sample(core::RngStream& rng) const {
    return static_cast<std::uint32_t>(rng.below(order()));
  }

 private:
  int w_;
  std::uint32_t poly_;
};

}  // namespace specshape::rlnc
