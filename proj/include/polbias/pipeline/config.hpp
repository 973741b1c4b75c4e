#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/corpus/topic.hpp"
#include "polbias/framing/entities.hpp"
#include "polbias/gateway/types.hpp"

namespace polbias::pipeline {

using gateway::EndpointConfig;
using gateway::Mode;

// Run configuration document (JSON):
//
//   topics              list of topic objects; omitted -> the 14 built-in topics
//   models              list of endpoint objects, one per generator model
//   embedding, frame_classifier, ner, sentiment, media_bias
//                       endpoint objects for the analysis backends
//   samples_per_topic   headlines per (model, topic), default 1000, >= 10
//   headlines_per_request  default 10
//   request_cap_factor  hard cap on requests as a multiple of the nominal count, default 2
//   anchor_samples      anchor headlines per side, default samples_per_topic
//   anchor_source       "self" or the id of the model that writes every anchor set
//   seed, resamples (10000), alpha (0.01), k (10)
//   sampling            {temperature: 1.0, max_tokens: 512}
//   entity_aliases      {"variant": "Canonical"}; empty by default
//   mode                live | replay; replay needs `bundle`
//   bundle, output_dir, cache_dir (default <output_dir>/cache), workers (default 1)
struct RunConfig {
  std::vector<corpus::TopicSpec> topics;
  std::vector<EndpointConfig> models;
  EndpointConfig embedding;
  EndpointConfig frame_classifier;
  EndpointConfig ner;
  EndpointConfig sentiment;
  EndpointConfig media_bias;

  std::size_t samples_per_topic = 1000;
  std::size_t headlines_per_request = 10;
  double request_cap_factor = 2.0;
  std::size_t anchor_samples = 0;
  std::string anchor_source = "self";

  std::uint64_t seed = 0;
  int resamples = 10000;
  double alpha = 0.01;
  std::size_t k = 10;
  double temperature = 1.0;
  int max_tokens = 512;
  framing::AliasTable aliases;

  Mode mode = Mode::kLive;
  std::filesystem::path bundle;
  std::filesystem::path output_dir = "polbias-out";
  std::filesystem::path cache_dir;
  std::size_t workers = 1;

  const EndpointConfig* model(const std::string& id) const;
  const corpus::TopicSpec* topic(const std::string& id) const;
  // Model whose anchor generations serve `model_id`.
  std::string anchor_model_for(const std::string& model_id) const;
  bool writes_anchors(const std::string& model_id) const;
};

// Command-line overrides applied on top of the document.
struct Overrides {
  std::optional<Mode> mode;
  std::optional<std::filesystem::path> bundle;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> models;
  std::vector<std::string> topics;
  std::optional<std::filesystem::path> output_dir;
};

RunConfig load_run_config(const Json& document, const Overrides& overrides = {});
RunConfig load_run_config_file(const std::filesystem::path& path, const Overrides& overrides = {});

// Everything that influences data artifacts (no paths, mode or worker count).
Json analysis_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

struct Diagnostic {
  enum class Level { kError, kWarning };
  Level level = Level::kError;
  std::string subject;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

// Checks topics and anchors, endpoint settings, auth variables, reachability
// of live HTTP endpoints (when probe_network) and bundle integrity in replay
// mode. Never writes anything.
std::vector<Diagnostic> validate(const Json& document, const Overrides& overrides = {}, bool probe_network = true);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace polbias::pipeline
