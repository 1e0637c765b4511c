#include "specshape/core/config.hpp"

#include <sstream>

namespace specshape::core {

const char* to_string(PuMode m) {
  return m == PuMode::NetworkCoding ? "network_coding" : "arq";
}

const char* to_string(SuStrategy s) {
  switch (s) {
    case SuStrategy::Random:
      return "random";
    case SuStrategy::AdaptiveTwoStage:
      return "adaptive_two_stage";
    default:
      return "single_channel_tracking";
  }
}

PuMode pu_mode_from_string(const std::string& s) {
  if (s == "network_coding") return PuMode::NetworkCoding;
  if (s == "arq") return PuMode::Arq;
  throw ConfigError({"pu_mode must be one of {network_coding, arq}, got '" + s + "'"});
}

SuStrategy su_strategy_from_string(const std::string& s) {
  if (s == "random") return SuStrategy::Random;
  if (s == "adaptive_two_stage") return SuStrategy::AdaptiveTwoStage;
  if (s == "single_channel_tracking") return SuStrategy::SingleChannelTracking;
  throw ConfigError(
      {"su_strategy must be one of {random, adaptive_two_stage, single_channel_tracking}, got '" +
       s + "'"});
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid config:";
  for (const auto& s : v) os << " [" << s << "]";
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

bool is_prime_power(std::uint64_t q) {
  if (q < 2) return false;
  // Find the smallest prime factor, then insist q is a pure power of it.
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return true;  // q itself is prime
  while (q % p == 0) q /= p;
  return q == 1;
}

NetworkConfig validate_config(const NetworkConfig& raw) {
  std::vector<std::string> bad;
  if (raw.num_channels < 1) bad.push_back("num_channels must be >= 1");
  if (raw.num_receivers < 1) bad.push_back("num_receivers must be >= 1");
  if (raw.batch_size < 1) bad.push_back("batch_size must be >= 1");
  // Written so NaN fails the test too.
  if (!(raw.arrival_rate >= 0.0 && raw.arrival_rate <= 1.0))
    bad.push_back("arrival_rate out of range [0, 1]");
  if (!(raw.erasure_prob >= 0.0 && raw.erasure_prob < 1.0))
    bad.push_back("erasure_prob out of range [0, 1)");
  if (raw.minislots_per_slot < 1) bad.push_back("minislots_per_slot must be >= 1");
  if (!is_prime_power(raw.field_size)) bad.push_back("field_size must be a prime power >= 2");
  if (raw.backoff < 0) bad.push_back("backoff must be >= 0");
  if (raw.su_strategy == SuStrategy::SingleChannelTracking && raw.num_channels != 1)
    bad.push_back("single_channel_tracking requires num_channels == 1");
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return raw;
}

}  // namespace specshape::core
