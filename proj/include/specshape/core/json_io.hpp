#pragma once

#include <string>

#include <json.hpp>

#include "specshape/core/config.hpp"

namespace specshape::core {

nlohmann::json config_to_json(const NetworkConfig& cfg);

// Strict parse: every field required, unknown keys rejected, then
// validate_config applied.  Throws ConfigError on any problem.
NetworkConfig config_from_json(const nlohmann::json& j);

std::string config_to_json_text(const NetworkConfig& cfg);
NetworkConfig config_from_json_text(const std::string& text);

}  // namespace specshape::core
