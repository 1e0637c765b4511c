#include "specshape/rlnc/gf.hpp"

#include <stdexcept>

namespace specshape::rlnc {

GaloisField::GaloisField(int word_bits) : w_(word_bits) {
  switch (word_bits) {
    case 1:
      poly_ = 0x3;  // x + 1
      break;
    case 4:
      poly_ = 0x13;  // x^4 + x + 1
      break;
    case 8:
      poly_ = 0x11B;  // x^8 + x^4 + x^3 + x + 1
      break;
    case 16:
      poly_ = 0x1100B;  // x^16 + x^12 + x^3 + x + 1
      break;
    default:
      throw std::invalid_argument("field width must be one of {1, 4, 8, 16} bits");
  }
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("zero has no inverse");
  // a^(2^w - 2) by square-and-multiply.
  std::uint32_t e = order() - 2;
  std::uint32_t result = 1;
  std::uint32_t base = a;
  while (e) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

}  // namespace specshape::rlnc
