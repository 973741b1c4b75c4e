#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polbias/common/json_io.hpp"

namespace polbias::gateway {

enum class CallKind { kGenerate, kEmbed, kClassifyFrames, kExtractEntities, kTargetSentiment, kMediaBias };

std::string_view to_string(CallKind kind);

enum class Mode { kLive, kReplay };
std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// How to reach one model or classifier. `backend` selects the transport:
// "http" speaks the JSON wire formats, "mock" uses the built-in deterministic
// fixture models (configured through `options`).
struct EndpointConfig {
  std::string id;
  std::string backend = "http";
  std::string base_url;
  std::string path;
  std::string model_name;
  std::string auth_token_env;
  double timeout_s = 60.0;
  int max_retries = 3;
  double rate_limit = 0.0;  // requests/second; <= 0 means unlimited
  Json options = Json::object();
};

// Parses an endpoint object; throws ConfigError on invariant violations.
EndpointConfig endpoint_from_json(const Json& j, std::string_view default_id = "");
Json to_json(const EndpointConfig& e);
void validate_endpoint(const EndpointConfig& e);

struct EmbeddingVector {
  std::vector<double> values;
  bool normalized = false;

  std::size_t dim() const { return values.size(); }
};

// Returns a unit-length copy. Throws IntegrityError on non-finite or zero input.
EmbeddingVector normalize(std::vector<double> values);

}  // namespace polbias::gateway
