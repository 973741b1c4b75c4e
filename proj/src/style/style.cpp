#include "polbias/style/style.hpp"

#include <algorithm>
#include <cmath>

#include "polbias/common/errors.hpp"

namespace polbias::style {

Polarity dominant_polarity(std::size_t positive, std::size_t negative, std::size_t neutral) {
  const std::size_t total = positive + negative + neutral;
  if (2 * positive > total) return Polarity::kPositive;
  if (2 * negative > total) return Polarity::kNegative;
  return Polarity::kNeutral;
}

std::map<std::string, PolarityDistribution> aggregate_entity_polarity(std::span<const PolarityRecord> records) {
  std::map<std::string, PolarityDistribution> out;
  for (const auto& r : records) {
    auto& d = out[r.entity];
    switch (r.polarity) {
      case Polarity::kPositive: ++d.positive; break;
      case Polarity::kNegative: ++d.negative; break;
      case Polarity::kNeutral: ++d.neutral; break;
    }
  }
  for (auto& [_, d] : out) d.dominant = dominant_polarity(d.positive, d.negative, d.neutral);
  return out;
}

namespace {

RateField lexical_field(std::span<const PolarityRecord> records) {
  RateField f;
  f.denominator = records.size();
  f.count = static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.polarity != Polarity::kNeutral; }));
  if (f.denominator > 0) f.rate = static_cast<double>(f.count) / static_cast<double>(f.denominator);
  return f;
}

RateField bias_field(std::span<const std::optional<MediaBiasLabel>> labels) {
  RateField f;
  for (const auto& l : labels) {
    if (!l) continue;
    ++f.denominator;
    if (*l == MediaBiasLabel::kBiased) ++f.count;
  }
  if (f.denominator > 0) f.rate = static_cast<double>(f.count) / static_cast<double>(f.denominator);
  return f;
}

}  // namespace

std::optional<double> lexical_polarity_rate(std::span<const PolarityRecord> records) {
  return lexical_field(records).rate;
}

std::optional<double> media_bias_rate(std::span<const std::optional<MediaBiasLabel>> labels) {
  return bias_field(labels).rate;
}

std::optional<double> media_bias_rate(std::span<const MediaBiasLabel> labels) {
  std::vector<std::optional<MediaBiasLabel>> wrapped(labels.begin(), labels.end());
  return media_bias_rate(wrapped);
}

std::optional<RateSummary> summarize_rates(std::span<const std::optional<double>> rates) {
  RateSummary s;
  double sum = 0.0;
  for (const auto& r : rates) {
    if (!r) continue;
    ++s.n;
    sum += *r;
  }
  if (s.n == 0) return std::nullopt;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (const auto& r : rates) {
    if (r) sq += (*r - s.mean) * (*r - s.mean);
  }
  s.stddev = std::sqrt(sq / static_cast<double>(s.n));
  return s;
}

StyleProfile build_style_profile(std::string model_id, std::string topic_id, std::span<const PolarityRecord> records,
                                 std::span<const std::optional<MediaBiasLabel>> bias_labels) {
  StyleProfile p;
  p.model_id = std::move(model_id);
  p.topic_id = std::move(topic_id);
  p.entities = aggregate_entity_polarity(records);
  p.lexical_polarity = lexical_field(records);
  p.media_bias = bias_field(bias_labels);
  p.media_bias_excluded = bias_labels.size() - p.media_bias.denominator;
  return p;
}

Json to_json(const PolarityRecord& r) {
  return Json{{"model", r.model_id},         {"topic", r.topic_id}, {"request_index", r.request_index},
              {"position", r.position},      {"entity", r.entity},  {"surface", r.surface},
              {"polarity", std::string(to_string(r.polarity))}};
}

PolarityRecord polarity_record_from_json(const Json& j) {
  PolarityRecord r;
  r.model_id = j.at("model").get<std::string>();
  r.topic_id = j.at("topic").get<std::string>();
  r.request_index = j.at("request_index").get<std::size_t>();
  r.position = j.at("position").get<std::size_t>();
  r.entity = j.at("entity").get<std::string>();
  r.surface = j.value("surface", r.entity);
  const auto pol = polarity_from_string(j.at("polarity").get<std::string>());
  if (!pol) throw IntegrityError("unknown polarity '" + j.at("polarity").get<std::string>() + "'");
  r.polarity = *pol;
  return r;
}

Json to_json(const PolarityDistribution& d) {
  return Json{{"positive", d.positive},
              {"negative", d.negative},
              {"neutral", d.neutral},
              {"dominant", std::string(to_string(d.dominant))}};
}

namespace {

Json rate_json(const RateField& f) {
  return Json{{"rate", f.rate ? Json(*f.rate) : Json(nullptr)}, {"count", f.count}, {"denominator", f.denominator}};
}

RateField rate_from_json(const Json& j) {
  RateField f;
  if (!j.at("rate").is_null()) f.rate = j.at("rate").get<double>();
  f.count = j.at("count").get<std::size_t>();
  f.denominator = j.at("denominator").get<std::size_t>();
  return f;
}

}  // namespace

Json to_json(const StyleProfile& p) {
  Json entities = Json::object();
  for (const auto& [name, d] : p.entities) entities[name] = to_json(d);
  return Json{{"model", p.model_id},
              {"topic", p.topic_id},
              {"entities", entities},
              {"lexical_polarity", rate_json(p.lexical_polarity)},
              {"lexical_polarity_basis", "per-record"},
              {"media_bias", rate_json(p.media_bias)},
              {"media_bias_excluded", p.media_bias_excluded}};
}

StyleProfile style_profile_from_json(const Json& j) {
  StyleProfile p;
  p.model_id = j.at("model").get<std::string>();
  p.topic_id = j.at("topic").get<std::string>();
  for (const auto& [name, d] : j.at("entities").items()) {
    PolarityDistribution dist;
    dist.positive = d.at("positive").get<std::size_t>();
    dist.negative = d.at("negative").get<std::size_t>();
    dist.neutral = d.at("neutral").get<std::size_t>();
    dist.dominant = dominant_polarity(dist.positive, dist.negative, dist.neutral);
    p.entities[name] = dist;
  }
  p.lexical_polarity = rate_from_json(j.at("lexical_polarity"));
  p.media_bias = rate_from_json(j.at("media_bias"));
  p.media_bias_excluded = j.value("media_bias_excluded", std::size_t{0});
  return p;
}

}  // namespace polbias::style
