#include <algorithm>

#include "polbias/report/report.hpp"

namespace polbias::report {

SummaryStats build_summary(std::span<const stance::StanceResult> results, const std::set<std::string>& policy_topics,
                           std::span<const framing::EntityProfile> entity_profiles, std::size_t k,
                           std::span<const style::StyleProfile> style_profiles) {
  SummaryStats s;
  std::map<std::string, std::pair<double, std::size_t>> by_model, by_topic;
  for (const auto& r : results) {
    if (!policy_topics.empty() && !policy_topics.contains(r.topic_id)) continue;
    ++s.policy_cells;
    if (r.label == stance::StanceLabel::kNeutral) ++s.neutral_cells;
    auto& m = by_model[r.model_id];
    m.first += r.norm_pct;
    ++m.second;
    auto& t = by_topic[r.topic_id];
    t.first += r.norm_pct;
    ++t.second;
  }
  if (s.policy_cells > 0) {
    s.neutrality_rate = static_cast<double>(s.neutral_cells) / static_cast<double>(s.policy_cells);
  }
  for (const auto& [id, acc] : by_model) s.model_mean_norm[id] = acc.first / static_cast<double>(acc.second);
  for (const auto& [id, acc] : by_topic) s.topic_mean_norm[id] = acc.first / static_cast<double>(acc.second);

  std::map<std::string, std::size_t> lists_per_topic;
  for (const auto& p : entity_profiles) ++lists_per_topic[p.topic_id];
  for (const auto& p : entity_profiles) {
    auto& topic = s.entity_concentration[p.topic_id];
    for (const auto& e : framing::top_k_entities(p, k)) {
      auto& c = topic[e.key];
      if (c.canonical.empty()) c.canonical = e.canonical;
      ++c.containing;
    }
  }
  for (auto& [topic_id, entities] : s.entity_concentration) {
    for (auto& [_, c] : entities) {
      c.lists = lists_per_topic[topic_id];
      c.fraction = static_cast<double>(c.containing) / static_cast<double>(c.lists);
    }
  }

  for (const auto& p : style_profiles) s.media_bias_rates[p.model_id][p.topic_id] = p.media_bias.rate;
  for (const auto& [model, rates] : s.media_bias_rates) {
    std::vector<std::optional<double>> v;
    for (const auto& [_, r] : rates) v.push_back(r);
    s.media_bias_summary[model] = style::summarize_rates(v);
  }
  return s;
}

Json summary_to_json(const SummaryStats& s) {
  Json concentration = Json::object();
  for (const auto& [topic, entities] : s.entity_concentration) {
    Json t = Json::object();
    for (const auto& [key, c] : entities) {
      t[key] = Json{{"canonical", c.canonical}, {"lists", c.lists}, {"containing", c.containing}, {"fraction", c.fraction}};
    }
    concentration[topic] = t;
  }
  Json media = Json::object();
  for (const auto& [model, rates] : s.media_bias_rates) {
    Json per_topic = Json::object();
    for (const auto& [topic, r] : rates) per_topic[topic] = r ? Json(*r) : Json(nullptr);
    Json entry{{"per_topic", per_topic}};
    const auto& sum = s.media_bias_summary.at(model);
    entry["n"] = sum ? sum->n : 0;
    entry["mean"] = sum ? Json(sum->mean) : Json(nullptr);
    entry["stddev"] = sum ? Json(sum->stddev) : Json(nullptr);
    media[model] = entry;
  }
  return Json{{"policy_cells", s.policy_cells},
              {"neutral_cells", s.neutral_cells},
              {"neutrality_rate", s.neutrality_rate},
              {"model_mean_norm_pct", s.model_mean_norm},
              {"topic_mean_norm_pct", s.topic_mean_norm},
              {"entity_concentration", concentration},
              {"media_bias", media},
              {"meta", {{"stddev", "population"}, {"lexical_polarity_basis", "per-record"}}}};
}

}  // namespace polbias::report
