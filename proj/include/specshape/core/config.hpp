#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace specshape::core {

// How a primary subnetwork serves its queue: coded generations of
// batch_size packets, or plain per-packet retransmission.
enum class PuMode { NetworkCoding, Arq };

// Secondary-user sensing policy.
enum class SuStrategy { Random, AdaptiveTwoStage, SingleChannelTracking };

const char* to_string(PuMode m);
const char* to_string(SuStrategy s);
PuMode pu_mode_from_string(const std::string& s);
SuStrategy su_strategy_from_string(const std::string& s);

// Full scenario parameterization shared by the analytical model and the
// simulator.
struct NetworkConfig {
  int num_channels = 10;             // N: primary channels
  int num_receivers = 20;            // L: receivers per primary subnetwork
  int batch_size = 8;                // m: coding generation size
  double arrival_rate = 0.4;         // lambda: packets per slot per channel
  double erasure_prob = 0.2;         // epsilon: per-receiver per-slot loss
  int minislots_per_slot = 15;       // B: SU budget per slot
  std::uint64_t field_size = 65536;  // q: coding field size, prime power
  int backoff = 4;                   // k: adaptive-sensing timer reset value
  PuMode pu_mode = PuMode::NetworkCoding;
  SuStrategy su_strategy = SuStrategy::Random;

  // Per-packet retransmission is served like a generation of one packet.
  int effective_batch_size() const {
    return pu_mode == PuMode::Arq ? 1 : batch_size;
  }

  bool operator==(const NetworkConfig&) const = default;
};

// Thrown by validate_config; carries one entry per violated bound.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Returns the config unchanged iff every bound holds, otherwise throws
// ConfigError naming every violated bound at once.
NetworkConfig validate_config(const NetworkConfig& raw);

bool is_prime_power(std::uint64_t q);

}  // namespace specshape::core
