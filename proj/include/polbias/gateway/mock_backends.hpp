#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polbias/corpus/topic.hpp"
#include "polbias/gateway/backend.hpp"
#include "polbias/gateway/labels.hpp"

namespace polbias::gateway {

// Deterministic, offline stand-ins for every call kind. They let the harness
// record fixture corpora and exercise the full pipeline without a network.
//
//   generate          template headline writer; options.lean maps topic
//                     (id or name) -> probability a headline takes the
//                     proponent side; options.entities biases subject choice;
//                     options.loaded_rate / shortfall_rate / numbered_rate add
//                     loaded wording, short replies and enumerations.
//   embed             signed feature hashing of word unigrams and bigrams
//                     (options.dim, default 256).
//   classify_frames   keyword rules over the numbered headlines in the prompt.
//   extract_entities  longest-match gazetteer (options.gazetteer extends it).
//   target_sentiment  polarity lexicon over the words outside the target.
//   media_bias        loaded-language lexicon.
std::shared_ptr<Backend> make_mock_backend(const EndpointConfig& endpoint, CallKind role,
                                           const std::vector<corpus::TopicSpec>& topics);

struct GazetteerEntry {
  std::string surface;
  EntityType type;
};

const std::vector<GazetteerEntry>& default_gazetteer();

// Lower-cased alphanumeric tokens (apostrophes and hyphens split words).
std::vector<std::string> word_tokens(std::string_view text);

}  // namespace polbias::gateway
