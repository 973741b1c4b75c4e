#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/corpus/topic.hpp"

namespace polbias::corpus {

struct SamplingParams {
  double temperature = 1.0;
  int max_tokens = 512;
  std::uint64_t seed = 0;
};

struct GenerationRecord {
  std::string model_id;
  std::string topic_id;
  Condition condition = Condition::kNeutral;
  std::string raw_text;
  int request_index = 0;
  SamplingParams params;
  std::string backend_id;
  // Set when the raw text yielded zero headlines.
  bool parse_warning = false;
};

// Identifies the generation a headline came from.
struct HeadlineSource {
  std::string model_id;
  std::string topic_id;
  Condition condition = Condition::kNeutral;
  int request_index = 0;

  auto operator<=>(const HeadlineSource&) const = default;
};

struct Headline {
  std::string text;
  HeadlineSource source;
  int position = 0;
};

// Splits `raw_text` on `tag` and normalizes each segment. Text before the
// first tag is preamble and dropped; each segment keeps its first non-empty
// line with whitespace, list markers and paired surrounding quotes removed.
// Duplicates are kept.
std::vector<std::string> parse_headline_texts(std::string_view raw_text, std::string_view tag);

struct ParsedHeadlines {
  std::vector<Headline> headlines;
  bool parse_warning = false;
};

ParsedHeadlines parse_headlines(const GenerationRecord& record, std::string_view tag);

// Inverse of parse_headline_texts for already-normalized headlines:
// one "<tag> <headline>" per line.
std::string join_headlines(std::span<const std::string> headlines, std::string_view tag);

// Normalization applied to every segment; exposed for tests.
std::string normalize_headline(std::string_view segment);

Json to_json(const GenerationRecord& record);
GenerationRecord generation_from_json(const Json& j);
Json to_json(const Headline& headline);
Headline headline_from_json(const Json& j);

}  // namespace polbias::corpus
