#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/gateway/labels.hpp"

namespace polbias::style {

struct PolarityRecord {
  std::string model_id;
  std::string topic_id;
  std::size_t request_index = 0;
  std::size_t position = 0;
  std::string entity;  // canonical form
  std::string surface;  // as written in the headline
  Polarity polarity = Polarity::kNeutral;
};

struct PolarityDistribution {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t neutral = 0;
  Polarity dominant = Polarity::kNeutral;

  std::size_t total() const { return positive + negative + neutral; }
};

// Per-entity counts keyed by canonical form. The dominant label is the strict
// majority of that entity's records; ties and pluralities give neutral.
std::map<std::string, PolarityDistribution> aggregate_entity_polarity(std::span<const PolarityRecord> records);

Polarity dominant_polarity(std::size_t positive, std::size_t negative, std::size_t neutral);

// Fraction of records with a non-neutral polarity; nullopt without records.
std::optional<double> lexical_polarity_rate(std::span<const PolarityRecord> records);

// Fraction labeled biased; nullopt labels (classifier failures) are excluded
// from both counts. nullopt when nothing usable remains.
std::optional<double> media_bias_rate(std::span<const std::optional<MediaBiasLabel>> labels);
std::optional<double> media_bias_rate(std::span<const MediaBiasLabel> labels);

struct RateSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

// Mean and population standard deviation of the present rates.
std::optional<RateSummary> summarize_rates(std::span<const std::optional<double>> rates);

struct RateField {
  std::optional<double> rate;
  std::size_t count = 0;        // numerator
  std::size_t denominator = 0;
};

struct StyleProfile {
  std::string model_id;
  std::string topic_id;
  std::map<std::string, PolarityDistribution> entities;
  RateField lexical_polarity;
  RateField media_bias;
  std::size_t media_bias_excluded = 0;
};

StyleProfile build_style_profile(std::string model_id, std::string topic_id, std::span<const PolarityRecord> records,
                                 std::span<const std::optional<MediaBiasLabel>> bias_labels);

Json to_json(const PolarityRecord& r);
PolarityRecord polarity_record_from_json(const Json& j);
Json to_json(const PolarityDistribution& d);
Json to_json(const StyleProfile& p);
StyleProfile style_profile_from_json(const Json& j);

}  // namespace polbias::style
