#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "specshape/rlnc/codec.hpp"

namespace specshape::rlnc {

// Line-oriented test-vector format, one block per case:
//
//   vector <word_bits> <generation_size> <payload_len> <decode | rank <r>>
//   packet <coeffs...> | <payload...>      (generation_size lines, hex)
//   source <payload...>                    (generation_size lines, hex;
//                                           only when the case decodes)
//   end
//
// '#' starts a comment, blank lines are ignored.
struct TestVector {
  int word_bits;
  int generation_size;
  int payload_len;
  bool expect_decode;
  int expect_rank;  // == generation_size when expect_decode
  std::vector<CodedPacket> packets;
  std::vector<std::vector<std::uint32_t>> sources;  // empty unless decode
};

std::vector<TestVector> parse_vectors(std::istream& in);
void write_vectors(std::ostream& out, const std::vector<TestVector>& vecs);

// Runs every block through the decoder; returns a line per failed block,
// empty on full success.
std::vector<std::string> verify_vectors(const std::vector<TestVector>& vecs);

// Deterministically generates `count` decodable blocks (plus one known
// rank-deficient block) for the given field width and generation size.
std::vector<TestVector> generate_vectors(int word_bits, int generation_size, int payload_len,
                                         int count, std::uint64_t seed);

}  // namespace specshape::rlnc
