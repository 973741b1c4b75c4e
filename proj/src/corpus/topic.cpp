#include "polbias/corpus/topic.hpp"

#include <set>

#include "polbias/common/errors.hpp"

namespace polbias::corpus {

std::string_view to_string(TopicKind kind) { return kind == TopicKind::kPolicy ? "policy" : "event"; }

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::kNeutral: return "neutral";
    case Condition::kPro: return "pro";
    case Condition::kOpp: return "opp";
  }
  return "neutral";
}

std::string_view to_string(Side side) { return side == Side::kPro ? "pro" : "opp"; }

Condition parse_condition(std::string_view text) {
  if (text == "neutral") return Condition::kNeutral;
  if (text == "pro") return Condition::kPro;
  if (text == "opp") return Condition::kOpp;
  throw Error("unknown condition '" + std::string(text) + "'");
}

std::vector<TopicSpec> default_topics() {
  auto policy = [](std::string id, std::string name, std::string pro, std::string opp) {
    return TopicSpec{std::move(id), std::move(name), TopicKind::kPolicy,
                     StanceTags{std::move(pro), std::move(opp)}};
  };
  auto event = [](std::string id, std::string name) {
    return TopicSpec{std::move(id), std::move(name), TopicKind::kEvent, std::nullopt};
  };
  return {
      policy("reproductive_rights", "Reproductive Rights", "Pro-reproductive right", "Anti-reproductive right"),
      policy("immigration", "Immigration", "Pro-immigration", "Anti-immigration"),
      policy("gun_control", "Gun Control", "Anti-gun", "Pro-gun"),
      policy("same_sex_marriage", "Same Sex Marriage", "Pro same-sex marriage", "Anti same-sex marriage"),
      policy("death_penalty", "Death Penalty", "Death Penalty proponent", "Death Penalty opponent"),
      policy("climate_change", "Climate Change", "Climate change advocate", "Climate change denier"),
      policy("drug_price_regularization", "Drug Price Regularization", "Drug Price Regularisation supporter",
             "Drug Price Regularisation opponent"),
      policy("public_education", "Public Education", "Pro Public Education", "Anti Public Education"),
      policy("healthcare_reform", "Healthcare Reform", "Pro Healthcare Reform", "Anti Healthcare Reform"),
      policy("social_media_regulation", "Social Media Regulation", "Pro Social Media Regulation",
             "Anti Social Media Regulation"),
      event("black_lives_matter", "Black Lives Matter"),
      event("hong_kong_protest", "Hong Kong Protest"),
      event("liancourt_rocks_dispute", "Liancourt Rocks dispute"),
      event("russia_ukraine_war", "Russia Ukraine war"),
  };
}

void validate_topic(const TopicSpec& topic) {
  if (topic.id.empty()) throw ConfigError("topic with empty id");
  if (topic.name.empty()) throw ConfigError("topic '" + topic.id + "' has an empty name");
  if (topic.kind == TopicKind::kEvent) {
    if (topic.anchors) throw ConfigError("event topic '" + topic.id + "' must not carry stance anchors");
    return;
  }
  if (!topic.anchors) throw ConfigError("policy topic '" + topic.id + "' is missing stance anchors");
  const auto& tags = *topic.anchors;
  if (tags.pro_tag.empty() || tags.opp_tag.empty()) {
    throw ConfigError("policy topic '" + topic.id + "' has an empty stance tag");
  }
  if (tags.pro_tag == tags.opp_tag) {
    throw ConfigError("policy topic '" + topic.id + "' uses the same tag for both stances");
  }
}

std::vector<TopicSpec> load_topics(const Json& config_document) {
  if (!config_document.is_object() || !config_document.contains("topics")) return default_topics();
  const Json& list = config_document.at("topics");
  if (!list.is_array()) throw ConfigError("'topics' must be an array");
  if (list.empty()) throw ConfigError("no topics");

  std::vector<TopicSpec> topics;
  std::set<std::string> seen;
  for (const auto& entry : list) {
    if (!entry.is_object()) throw ConfigError("topic entries must be objects");
    for (const char* field : {"id", "name", "kind"}) {
      if (!entry.contains(field) || !entry.at(field).is_string()) {
        throw ConfigError(std::string("topic entry missing string field '") + field + "'");
      }
    }
    TopicSpec topic;
    topic.id = entry.at("id").get<std::string>();
    topic.name = entry.at("name").get<std::string>();
    const auto kind = entry.at("kind").get<std::string>();
    if (kind == "policy") {
      topic.kind = TopicKind::kPolicy;
    } else if (kind == "event") {
      topic.kind = TopicKind::kEvent;
    } else {
      throw ConfigError("topic '" + topic.id + "' has unknown kind '" + kind + "'");
    }
    if (entry.contains("anchors") && !entry.at("anchors").is_null()) {
      const auto& a = entry.at("anchors");
      if (!a.is_object() || !a.contains("pro") || !a.contains("opp") || !a.at("pro").is_string() ||
          !a.at("opp").is_string()) {
        throw ConfigError("topic '" + topic.id + "' anchors must be {\"pro\": str, \"opp\": str}");
      }
      topic.anchors = StanceTags{a.at("pro").get<std::string>(), a.at("opp").get<std::string>()};
    }
    validate_topic(topic);
    if (!seen.insert(topic.id).second) throw ConfigError("duplicate topic id '" + topic.id + "'");
    topics.push_back(std::move(topic));
  }
  return topics;
}

Json to_json(const TopicSpec& topic) {
  Json j{{"id", topic.id}, {"name", topic.name}, {"kind", std::string(to_string(topic.kind))}};
  if (topic.anchors) {
    j["anchors"] = {{"pro", topic.anchors->pro_tag}, {"opp", topic.anchors->opp_tag}};
  }
  return j;
}

}  // namespace polbias::corpus
