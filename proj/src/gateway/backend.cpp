#include "polbias/gateway/backend.hpp"

#include <algorithm>

#include "polbias/common/errors.hpp"
#include "polbias/gateway/mock_backends.hpp"
#include "polbias/gateway/transport.hpp"

namespace polbias::gateway {

std::vector<Json> Backend::embed_batch(const std::string& model, const std::vector<std::string>& texts) {
  std::vector<Json> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(call(CallKind::kEmbed, Json{{"model", model}, {"input", t}}));
  return out;
}

HttpBackend::HttpBackend(EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}

std::string HttpBackend::id() const {
  return "http:" + endpoint_.base_url + "#" + endpoint_.model_name;
}

std::string HttpBackend::default_path(CallKind kind) {
  switch (kind) {
    case CallKind::kGenerate:
    case CallKind::kClassifyFrames: return "/v1/chat/completions";
    case CallKind::kEmbed: return "/v1/embeddings";
    case CallKind::kExtractEntities: return "/v1/entities";
    case CallKind::kTargetSentiment: return "/v1/target-sentiment";
    case CallKind::kMediaBias: return "/v1/media-bias";
  }
  return "/";
}

std::string HttpBackend::path_for(CallKind kind) const {
  return endpoint_.path.empty() ? default_path(kind) : endpoint_.path;
}

std::string completion_text(const Json& reply) {
  if (!reply.contains("choices") || !reply.at("choices").is_array() || reply.at("choices").empty()) {
    throw AttemptError({"reply has no choices", true});
  }
  const auto& choice = reply.at("choices").at(0);
  if (choice.contains("message") && choice.at("message").contains("content") &&
      choice.at("message").at("content").is_string()) {
    return choice.at("message").at("content").get<std::string>();
  }
  if (choice.contains("text") && choice.at("text").is_string()) return choice.at("text").get<std::string>();
  throw AttemptError({"reply choice carries no text", true});
}

Json HttpBackend::call(CallKind kind, const Json& request) {
  switch (kind) {
    case CallKind::kGenerate:
    case CallKind::kClassifyFrames: {
      Json body = request;
      body.erase("attempt");
      const Json reply = http_post_json(endpoint_, path_for(kind), body);
      return Json{{"text", completion_text(reply)}};
    }
    case CallKind::kEmbed: {
      auto replies = embed_batch(request.at("model").get<std::string>(), {request.at("input").get<std::string>()});
      return replies.at(0);
    }
    case CallKind::kExtractEntities: {
      const Json reply = http_post_json(endpoint_, path_for(kind), request);
      if (!reply.contains("entities") || !reply.at("entities").is_array()) {
        throw AttemptError({"entity reply lacks 'entities' array", true});
      }
      return Json{{"entities", reply.at("entities")}};
    }
    case CallKind::kTargetSentiment:
    case CallKind::kMediaBias: {
      const Json reply = http_post_json(endpoint_, path_for(kind), request);
      if (!reply.contains("label") || !reply.at("label").is_string()) {
        throw AttemptError({"classifier reply lacks 'label'", true});
      }
      return Json{{"label", reply.at("label")}};
    }
  }
  throw AttemptError({"unsupported call kind", false});
}

std::vector<Json> HttpBackend::embed_batch(const std::string& model, const std::vector<std::string>& texts) {
  const Json reply = http_post_json(endpoint_, path_for(CallKind::kEmbed), Json{{"model", model}, {"input", texts}});
  std::vector<Json> vectors;
  if (reply.contains("data") && reply.at("data").is_array()) {
    std::vector<std::pair<std::size_t, Json>> indexed;
    std::size_t fallback = 0;
    for (const auto& item : reply.at("data")) {
      indexed.emplace_back(item.value("index", fallback++), item.at("embedding"));
    }
    std::stable_sort(indexed.begin(), indexed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [idx, v] : indexed) vectors.push_back(std::move(v));
  } else if (reply.contains("embeddings") && reply.at("embeddings").is_array()) {
    for (const auto& v : reply.at("embeddings")) vectors.push_back(v);
  } else {
    throw AttemptError({"embedding reply has neither 'data' nor 'embeddings'", true});
  }
  if (vectors.size() != texts.size()) {
    throw AttemptError({"embedding reply has " + std::to_string(vectors.size()) + " vectors for " +
                            std::to_string(texts.size()) + " inputs",
                        false});
  }
  std::vector<Json> out;
  out.reserve(vectors.size());
  for (auto& v : vectors) out.push_back(Json{{"embedding", std::move(v)}});
  return out;
}

std::shared_ptr<Backend> make_backend(const EndpointConfig& endpoint, CallKind role,
                                      const std::vector<corpus::TopicSpec>& topics) {
  if (endpoint.backend == "http") return std::make_shared<HttpBackend>(endpoint);
  if (endpoint.backend == "mock") return make_mock_backend(endpoint, role, topics);
  throw ConfigError("unknown backend '" + endpoint.backend + "' for endpoint '" + endpoint.id + "'");
}

}  // namespace polbias::gateway
