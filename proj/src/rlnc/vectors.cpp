#include "specshape/rlnc/vectors.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specshape::rlnc {

namespace {

std::runtime_error bad_line(int lineno, const std::string& why) {
  return std::runtime_error("vector file line " + std::to_string(lineno) + ": " + why);
}

std::vector<std::uint32_t> parse_hex_list(std::istringstream& is, int count, int lineno) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  std::string tok;
  for (int i = 0; i < count; ++i) {
    if (!(is >> tok)) throw bad_line(lineno, "expected " + std::to_string(count) + " hex values");
    out.push_back(static_cast<std::uint32_t>(std::stoul(tok, nullptr, 16)));
  }
  return out;
}

}  // namespace

std::vector<TestVector> parse_vectors(std::istream& in) {
  std::vector<TestVector> vecs;
  std::string line;
  int lineno = 0;
  TestVector cur;
  bool open = false;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string word;
    if (!(is >> word)) continue;

    if (word == "vector") {
      if (open) throw bad_line(lineno, "previous block not closed with 'end'");
      cur = TestVector{};
      std::string expect;
      if (!(is >> cur.word_bits >> cur.generation_size >> cur.payload_len >> expect))
        throw bad_line(lineno, "malformed vector header");
      if (expect == "decode") {
        cur.expect_decode = true;
        cur.expect_rank = cur.generation_size;
      } else if (expect == "rank") {
        cur.expect_decode = false;
        if (!(is >> cur.expect_rank)) throw bad_line(lineno, "rank needs a value");
      } else {
        throw bad_line(lineno, "expectation must be 'decode' or 'rank <r>'");
      }
      open = true;
    } else if (word == "packet") {
      if (!open) throw bad_line(lineno, "'packet' outside a vector block");
      CodedPacket pkt;
      pkt.coeffs = parse_hex_list(is, cur.generation_size, lineno);
      std::string bar;
      if (!(is >> bar) || bar != "|") throw bad_line(lineno, "expected '|' separator");
      pkt.payload = parse_hex_list(is, cur.payload_len, lineno);
      cur.packets.push_back(std::move(pkt));
    } else if (word == "source") {
      if (!open) throw bad_line(lineno, "'source' outside a vector block");
      cur.sources.push_back(parse_hex_list(is, cur.payload_len, lineno));
    } else if (word == "end") {
      if (!open) throw bad_line(lineno, "'end' without a vector block");
      vecs.push_back(std::move(cur));
      open = false;
    } else {
      throw bad_line(lineno, "unknown directive '" + word + "'");
    }
  }
  if (open) throw bad_line(lineno, "unterminated vector block");
  return vecs;
}

void write_vectors(std::ostream& out, const std::vector<TestVector>& vecs) {
  auto hex_row = [&](const std::vector<std::uint32_t>& row) {
    for (auto v : row) out << ' ' << std::hex << v << std::dec;
  };
  for (const auto& v : vecs) {
    out << "vector " << v.word_bits << ' ' << v.generation_size << ' ' << v.payload_len << ' ';
    if (v.expect_decode)
      out << "decode\n";
    else
      out << "rank " << v.expect_rank << '\n';
    for (const auto& pkt : v.packets) {
      out << "packet";
      hex_row(pkt.coeffs);
      out << " |";
      hex_row(pkt.payload);
      out << '\n';
    }
    for (const auto& s : v.sources) {
      out << "source";
      hex_row(s);
      out << '\n';
    }
    out << "end\n";
  }
}

std::vector<std::string> verify_vectors(const std::vector<TestVector>& vecs) {
  std::vector<std::string> failures;
  for (size_t i = 0; i < vecs.size(); ++i) {
    const auto& v = vecs[i];
    const std::string tag = "block " + std::to_string(i);
    try {
      GaloisField gf(v.word_bits);
      DecoderState dec(gf, v.generation_size, v.payload_len);
      for (const auto& pkt : v.packets) dec.ingest(pkt);
      if (dec.rank() != v.expect_rank) {
        failures.push_back(tag + ": rank " + std::to_string(dec.rank()) + ", expected " +
                           std::to_string(v.expect_rank));
        continue;
      }
      if (v.expect_decode) {
        if (static_cast<int>(v.sources.size()) != v.generation_size) {
          failures.push_back(tag + ": decode block must list every source payload");
          continue;
        }
        if (dec.recovered() != v.sources) failures.push_back(tag + ": recovered payloads differ");
      }
    } catch (const std::exception& e) {
      failures.push_back(tag + ": " + e.what());
    }
  }
  return failures;
}

std::vector<TestVector> generate_vectors(int word_bits, int generation_size, int payload_len,
                                         int count, std::uint64_t seed) {
  GaloisField gf(word_bits);
  core::RngStream rng(seed);
  std::vector<TestVector> vecs;

  for (int c = 0; c < count; ++c) {
    TestVector v;
    v.word_bits = word_bits;
    v.generation_size = generation_size;
    v.payload_len = payload_len;
    v.expect_decode = true;
    v.expect_rank = generation_size;
    v.sources.resize(generation_size);
    for (auto& s : v.sources) {
      s.resize(payload_len);
      for (auto& x : s) x = gf.sample(rng);
    }
    // Draw coded packets until the set actually decodes; record exactly the
    // packets fed (possibly more than generation_size if unlucky draws).
    DecoderState dec(gf, generation_size, payload_len);
    while (!dec.complete()) {
      CodedPacket pkt = encode_batch(v.sources, gf, rng);
      dec.ingest(pkt);
      v.packets.push_back(std::move(pkt));
    }
    vecs.push_back(std::move(v));
  }

  // One deliberately rank-deficient block: the same combination twice.
  TestVector v;
  v.word_bits = word_bits;
  v.generation_size = generation_size;
  v.payload_len = payload_len;
  v.expect_decode = false;
  v.expect_rank = generation_size > 1 ? 1 : 1;
  std::vector<std::vector<std::uint32_t>> sources(generation_size);
  for (auto& s : sources) {
    s.resize(payload_len);
    for (auto& x : s) x = gf.sample(rng);
  }
  std::vector<std::uint32_t> coeffs(generation_size, 0);
  coeffs[0] = 1;
  if (generation_size > 1) coeffs[generation_size - 1] = 1;
  CodedPacket pkt = encode_with_coeffs(sources, coeffs, gf);
  v.packets.push_back(pkt);
  v.packets.push_back(pkt);
  v.expect_rank = 1;
  vecs.push_back(std::move(v));

  return vecs;
}

}  // namespace specshape::rlnc
