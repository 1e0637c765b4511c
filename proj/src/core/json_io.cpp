#include "specshape/core/json_io.hpp"

#include <set>

namespace specshape::core {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "num_channels",  "num_receivers", "batch_size", "arrival_rate", "erasure_prob",
    "minislots_per_slot", "field_size", "backoff",  "pu_mode",      "su_strategy"};

const json& require(const json& j, const char* key, std::vector<std::string>& bad) {
  static const json missing;
  auto it = j.find(key);
  if (it == j.end()) {
    bad.push_back(std::string("missing key '") + key + "'");
    return missing;
  }
  return *it;
}

void read_int(const json& j, const char* key, int& out, std::vector<std::string>& bad) {
  const json& v = require(j, key, bad);
  if (v.is_null()) return;
  if (!v.is_number_integer()) {
    bad.push_back(std::string("'") + key + "' must be an integer");
    return;
  }
  out = v.get<int>();
}

void read_u64(const json& j, const char* key, std::uint64_t& out, std::vector<std::string>& bad) {
  const json& v = require(j, key, bad);
  if (v.is_null()) return;
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    bad.push_back(std::string("'") + key + "' must be a non-negative integer");
    return;
  }
  out = v.get<std::uint64_t>();
}

void read_double(const json& j, const char* key, double& out, std::vector<std::string>& bad) {
  const json& v = require(j, key, bad);
  if (v.is_null()) return;
  if (!v.is_number()) {
    bad.push_back(std::string("'") + key + "' must be a number");
    return;
  }
  out = v.get<double>();
}

void read_string(const json& j, const char* key, std::string& out, std::vector<std::string>& bad) {
  const json& v = require(j, key, bad);
  if (v.is_null()) return;
  if (!v.is_string()) {
    bad.push_back(std::string("'") + key + "' must be a string");
    return;
  }
  out = v.get<std::string>();
}

}  // namespace

nlohmann::json config_to_json(const NetworkConfig& cfg) {
  return nlohmann::json{{"num_channels", cfg.num_channels},
                        {"num_receivers", cfg.num_receivers},
                        {"batch_size", cfg.batch_size},
                        {"arrival_rate", cfg.arrival_rate},
                        {"erasure_prob", cfg.erasure_prob},
                        {"minislots_per_slot", cfg.minislots_per_slot},
                        {"field_size", cfg.field_size},
                        {"backoff", cfg.backoff},
                        {"pu_mode", to_string(cfg.pu_mode)},
                        {"su_strategy", to_string(cfg.su_strategy)}};
}

NetworkConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
  std::vector<std::string> bad;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kKnownKeys.count(it.key())) bad.push_back("unknown key '" + it.key() + "'");
  }

  NetworkConfig cfg;
  read_int(j, "num_channels", cfg.num_channels, bad);
  read_int(j, "num_receivers", cfg.num_receivers, bad);
  read_int(j, "batch_size", cfg.batch_size, bad);
  read_double(j, "arrival_rate", cfg.arrival_rate, bad);
  read_double(j, "erasure_prob", cfg.erasure_prob, bad);
  read_int(j, "minislots_per_slot", cfg.minislots_per_slot, bad);
  read_u64(j, "field_size", cfg.field_size, bad);
  read_int(j, "backoff", cfg.backoff, bad);

  std::string mode, strategy;
  read_string(j, "pu_mode", mode, bad);
  read_string(j, "su_strategy", strategy, bad);
  if (!bad.empty()) throw ConfigError(std::move(bad));

  cfg.pu_mode = pu_mode_from_string(mode);
  cfg.su_strategy = su_strategy_from_string(strategy);
  return validate_config(cfg);
}

std::string config_to_json_text(const NetworkConfig& cfg) { return config_to_json(cfg).dump(2); }

NetworkConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }
  return config_from_json(j);
}

}  // namespace specshape::core
