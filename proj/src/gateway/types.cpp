#include "polbias/gateway/types.hpp"

#include <cmath>

#include "polbias/common/errors.hpp"

namespace polbias::gateway {

std::string_view to_string(CallKind kind) {
  switch (kind) {
    case CallKind::kGenerate: return "generate";
    case CallKind::kEmbed: return "embed";
    case CallKind::kClassifyFrames: return "classify_frames";
    case CallKind::kExtractEntities: return "extract_entities";
    case CallKind::kTargetSentiment: return "target_sentiment";
    case CallKind::kMediaBias: return "media_bias";
  }
  return "generate";
}

std::string_view to_string(Mode mode) { return mode == Mode::kLive ? "live" : "replay"; }

Mode parse_mode(std::string_view text) {
  if (text == "live") return Mode::kLive;
  if (text == "replay") return Mode::kReplay;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected live|replay)");
}

void validate_endpoint(const EndpointConfig& e) {
  if (e.id.empty()) throw ConfigError("endpoint without id");
  if (!(e.timeout_s > 0.0)) throw ConfigError("endpoint '" + e.id + "': timeout must be > 0");
  if (e.max_retries < 0) throw ConfigError("endpoint '" + e.id + "': max_retries must be >= 0");
  if (e.backend != "http" && e.backend != "mock") {
    throw ConfigError("endpoint '" + e.id + "': unknown backend '" + e.backend + "'");
  }
  if (e.backend == "http" && e.base_url.empty()) {
    throw ConfigError("endpoint '" + e.id + "': http backend requires base_url");
  }
  if (e.model_name.empty()) throw ConfigError("endpoint '" + e.id + "': model_name is required");
}

EndpointConfig endpoint_from_json(const Json& j, std::string_view default_id) {
  if (!j.is_object()) throw ConfigError("endpoint entry must be an object");
  EndpointConfig e;
  try {
    e.id = j.value("id", std::string(default_id));
    e.backend = j.value("backend", std::string("http"));
    e.base_url = j.value("base_url", std::string());
    e.path = j.value("path", std::string());
    e.model_name = j.value("model_name", e.id);
    e.auth_token_env = j.value("auth_token_env", std::string());
    e.timeout_s = j.value("timeout", 60.0);
    e.max_retries = j.value("max_retries", 3);
    e.rate_limit = j.value("rate_limit", 0.0);
    if (j.contains("options")) e.options = j.at("options");
  } catch (const Json::exception& ex) {
    throw ConfigError("endpoint '" + e.id + "': " + ex.what());
  }
  validate_endpoint(e);
  return e;
}

Json to_json(const EndpointConfig& e) {
  return Json{{"id", e.id},
              {"backend", e.backend},
              {"base_url", e.base_url},
              {"path", e.path},
              {"model_name", e.model_name},
              {"auth_token_env", e.auth_token_env},
              {"timeout", e.timeout_s},
              {"max_retries", e.max_retries},
              {"rate_limit", e.rate_limit},
              {"options", e.options}};
}

EmbeddingVector normalize(std::vector<double> values) {
  if (values.empty()) throw IntegrityError("embedding has zero dimensions");
  double sq = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw IntegrityError("embedding contains a non-finite entry");
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0)) throw IntegrityError("embedding has zero norm");
  for (double& v : values) v /= norm;
  return EmbeddingVector{std::move(values), true};
}

}  // namespace polbias::gateway
