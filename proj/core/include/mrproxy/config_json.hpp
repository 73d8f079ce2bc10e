#pragma once

#include <string>

#include <json.hpp>

#include "mrproxy/trio_scm.hpp"

namespace mrproxy {

using Json = nlohmann::ordered_json;

Json to_json(const GenerationParams& params);
Json to_json(const ScmConfig& config);

// Strict readers: every key must be known, every value well typed. Missing
// keys keep the value already in `into`. Errors are ConfigError with the
// dotted field path, e.g. "scm.parent.exposure_model".
void merge_generation_params(const Json& j, const std::string& path, GenerationParams& into);
void merge_scm_config(const Json& j, const std::string& path, ScmConfig& into);

// 16 hex digits of FNV-1a over the compact JSON form of the config.
std::string config_digest(const ScmConfig& config);

// Shortest round-trip decimal form; integral values print without a point.
std::string format_number(double value);

}  // namespace mrproxy
