#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/corpus/topic.hpp"
#include "polbias/gateway/types.hpp"

namespace polbias::gateway {

// One model or classifier behind a uniform request/response surface.
// Requests and responses are the canonical JSON payloads stored in cache
// envelopes:
//   generate / classify_frames  {model, messages, temperature, max_tokens, seed} -> {text}
//   embed (per text)            {model, input}                                -> {embedding}
//   extract_entities            {model, text}          -> {entities: [{text, type, start, end}]}
//   target_sentiment            {model, text, target}  -> {label}
//   media_bias                  {model, text}          -> {label}
// Failures are reported by throwing AttemptError.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual Json call(CallKind kind, const Json& request) = 0;
  // One reply per input, in order. The default calls call() per text.
  virtual std::vector<Json> embed_batch(const std::string& model, const std::vector<std::string>& texts);
};

// Speaks the chat-completion / embeddings JSON conventions over HTTP.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(EndpointConfig endpoint);
  std::string id() const override;
  Json call(CallKind kind, const Json& request) override;
  std::vector<Json> embed_batch(const std::string& model, const std::vector<std::string>& texts) override;

  static std::string default_path(CallKind kind);

 private:
  std::string path_for(CallKind kind) const;
  EndpointConfig endpoint_;
};

// Builds the backend named by endpoint.backend. Mock backends receive the
// topic table so they can recognise prompts.
std::shared_ptr<Backend> make_backend(const EndpointConfig& endpoint, CallKind role,
                                      const std::vector<corpus::TopicSpec>& topics);

// Extracts the completion text from a chat-completion reply.
std::string completion_text(const Json& reply);

}  // namespace polbias::gateway
