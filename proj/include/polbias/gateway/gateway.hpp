#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polbias/corpus/headline.hpp"
#include "polbias/corpus/prompt.hpp"
#include "polbias/gateway/backend.hpp"
#include "polbias/gateway/cache.hpp"
#include "polbias/gateway/labels.hpp"
#include "polbias/gateway/transport.hpp"
#include "polbias/gateway/types.hpp"

namespace polbias::gateway {

// Cache-first access to one endpoint. In live mode a miss goes to the
// backend (rate-limited, retried) and the reply is persisted before it is
// returned. In replay mode there is no backend and a miss is an error.
class CallSite {
 public:
  CallSite(EndpointConfig endpoint, std::shared_ptr<Backend> backend, std::shared_ptr<ArtifactCache> cache, Mode mode);

  struct Result {
    Json response;
    std::string backend_id;
    bool from_cache = false;
  };

  Result call(CallKind kind, const Json& payload, std::uint64_t seed);

  // Per-text cached embedding calls; misses are sent to the backend in one batch.
  std::vector<Result> call_embed(const std::vector<std::string>& texts);

  const EndpointConfig& endpoint() const { return endpoint_; }
  Mode mode() const { return mode_; }
  std::uint64_t backend_calls() const { return backend_calls_.load(); }

  // Overrides the retry backoff sleep (tests).
  void set_retry_sleeper(RetryPolicy::Sleeper sleeper) { retry_.set_sleeper(std::move(sleeper)); }

 private:
  EndpointConfig endpoint_;
  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ArtifactCache> cache_;
  Mode mode_;
  std::shared_ptr<RateLimiter> limiter_;
  RetryPolicy retry_;
  std::atomic<std::uint64_t> backend_calls_{0};
};

struct GenerationReply {
  std::string text;
  std::string backend_id;
};

class GenerationClient {
 public:
  explicit GenerationClient(std::shared_ptr<CallSite> site) : site_(std::move(site)) {}
  GenerationReply generate(const corpus::PromptSpec& prompt, const corpus::SamplingParams& params);
  CallSite& site() { return *site_; }

 private:
  std::shared_ptr<CallSite> site_;
};

struct EmbeddingBatch {
  std::vector<EmbeddingVector> vectors;
  std::string backend_id;
};

class Embedder {
 public:
  explicit Embedder(std::shared_ptr<CallSite> site, std::size_t batch_size = 64)
      : site_(std::move(site)), batch_size_(batch_size) {}
  // Order-preserving, unit-normalized. Throws PreconditionError on empty text
  // and IntegrityError when dimensions disagree.
  EmbeddingBatch embed(const std::vector<std::string>& texts);

 private:
  std::shared_ptr<CallSite> site_;
  std::size_t batch_size_;
};

struct FrameAssignment {
  FrameSet frames;  // never empty; empty replies become {Other}
  bool parse_warning = false;
};

// The classifier prompt for a batch of headlines.
std::string render_frame_prompt(std::span<const std::string> headlines, std::string_view topic_name);

// Parses "N. Classes: [...]" lines. Result i is nullopt when headline i has no
// parseable line or names a label outside the 15 classes; an empty set means
// the classifier answered "Classes: []".
std::vector<std::optional<FrameSet>> parse_frame_reply(std::string_view reply, std::size_t expected);

class FrameClassifier {
 public:
  explicit FrameClassifier(std::shared_ptr<CallSite> site, std::size_t batch_size = 10, int max_tokens = 512)
      : site_(std::move(site)), batch_size_(batch_size), max_tokens_(max_tokens) {}
  std::vector<FrameAssignment> classify_frames(std::span<const corpus::Headline> headlines,
                                               const corpus::TopicSpec& topic);
  std::string backend_id() const { return backend_id_; }

 private:
  std::shared_ptr<CallSite> site_;
  std::size_t batch_size_;
  int max_tokens_;
  std::string backend_id_;
};

struct EntityMention {
  std::string surface;
  EntityType type = EntityType::kMisc;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct EntityExtraction {
  std::vector<EntityMention> mentions;
  bool warning = false;
  std::string backend_id;
};

// Keeps only spans that are in-bounds, match their surface and do not
// overlap an earlier span. Returns true if anything was dropped.
bool sanitize_mentions(std::string_view text, std::vector<EntityMention>& mentions);

class EntityTagger {
 public:
  explicit EntityTagger(std::shared_ptr<CallSite> site) : site_(std::move(site)) {}
  EntityExtraction extract_entities(const corpus::Headline& headline);

 private:
  std::shared_ptr<CallSite> site_;
};

struct SentimentReply {
  Polarity polarity = Polarity::kNeutral;
  std::string backend_id;
};

class SentimentClassifier {
 public:
  explicit SentimentClassifier(std::shared_ptr<CallSite> site) : site_(std::move(site)) {}
  // Throws PreconditionError when the target does not occur in the headline.
  SentimentReply target_sentiment(const corpus::Headline& headline, const std::string& entity_surface);

 private:
  std::shared_ptr<CallSite> site_;
};

struct MediaBiasReply {
  std::optional<MediaBiasLabel> label;  // nullopt: excluded after backend failure
  std::string backend_id;
};

class MediaBiasClassifier {
 public:
  explicit MediaBiasClassifier(std::shared_ptr<CallSite> site) : site_(std::move(site)) {}
  MediaBiasReply classify_media_bias(const corpus::Headline& headline);

 private:
  std::shared_ptr<CallSite> site_;
};

}  // namespace polbias::gateway
