#include "polbias/framing/entities.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "polbias/common/errors.hpp"
#include "polbias/common/log.hpp"

namespace polbias::framing {
namespace {

// ASCII punctuation plus the UTF-8 curly quotes.
constexpr std::string_view kEdgePunct = " \t\r\n\"'`.,;:!?()[]{}<>*_";
constexpr std::array<std::string_view, 4> kCurly{"\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99"};

std::string_view strip_edges(std::string_view s) {
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    while (!s.empty() && kEdgePunct.find(s.front()) != std::string_view::npos) {
      s.remove_prefix(1);
      changed = true;
    }
    while (!s.empty() && kEdgePunct.find(s.back()) != std::string_view::npos) {
      s.remove_suffix(1);
      changed = true;
    }
    for (auto q : kCurly) {
      if (s.starts_with(q)) {
        s.remove_prefix(q.size());
        changed = true;
      }
      if (s.ends_with(q)) {
        s.remove_suffix(q.size());
        changed = true;
      }
    }
  }
  return s;
}

std::string_view strip_possessive(std::string_view s) {
  for (std::string_view suffix : {"'s", "'S", "\xE2\x80\x99s", "\xE2\x80\x99S"}) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) return s.substr(0, s.size() - suffix.size());
  }
  return s;
}

}  // namespace

std::string fold_entity(std::string_view text) {
  std::string out;
  bool space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

AliasTable AliasTable::from_json(const Json& j) {
  AliasTable table;
  if (j.is_null()) return table;
  if (!j.is_object()) throw ConfigError("entity aliases must be an object of variant -> canonical");
  for (const auto& [variant, canonical] : j.items()) table.add(variant, canonical.get<std::string>());
  return table;
}

void AliasTable::add(std::string_view variant, std::string canonical) { map_[fold_entity(variant)] = std::move(canonical); }

const std::string* AliasTable::find(std::string_view folded_key) const {
  auto it = map_.find(std::string(folded_key));
  return it == map_.end() ? nullptr : &it->second;
}

Json AliasTable::to_json() const {
  Json j = Json::object();
  for (const auto& [k, v] : map_) j[k] = v;
  return j;
}

CanonicalMention canonicalize(const EntityMention& mention, const AliasTable& aliases) {
  auto s = strip_edges(mention.surface);
  s = strip_edges(strip_possessive(s));
  CanonicalMention out;
  out.surface = std::string(s);
  out.key = fold_entity(s);
  out.canonical = out.surface;
  out.type = mention.type;
  if (const auto* target = aliases.find(out.key)) {
    out.canonical = *target;
    out.key = fold_entity(*target);
  }
  return out;
}

std::vector<CanonicalMention> canonicalize_entities(std::span<const EntityMention> mentions,
                                                    const AliasTable& aliases) {
  std::vector<CanonicalMention> out;
  out.reserve(mentions.size());
  for (const auto& m : mentions) {
    auto c = canonicalize(m, aliases);
    if (!c.key.empty()) out.push_back(std::move(c));
  }
  return out;
}

const EntityStat* EntityProfile::find(std::string_view key) const {
  for (const auto& e : entities) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

EntityProfile build_entity_profile(std::span<const std::vector<EntityMention>> mentions_per_headline,
                                   const AliasTable& aliases, std::string model_id, std::string topic_id) {
  struct Acc {
    std::map<std::string, std::size_t> display_votes;
    std::set<std::string> surfaces;
    std::array<std::size_t, 4> type_votes{};
    std::size_t count = 0;
    bool aliased = false;
    std::string alias_target;
  };
  std::map<std::string, Acc> acc;
  for (const auto& mentions : mentions_per_headline) {
    for (const auto& c : canonicalize_entities(mentions, aliases)) {
      auto& a = acc[c.key];
      ++a.count;
      a.surfaces.insert(c.surface);
      ++a.type_votes[static_cast<std::size_t>(c.type)];
      if (c.canonical != c.surface || aliases.find(fold_entity(c.surface))) {
        a.aliased = true;
        a.alias_target = c.canonical;
      } else {
        ++a.display_votes[c.surface];
      }
    }
  }

  EntityProfile p;
  p.model_id = std::move(model_id);
  p.topic_id = std::move(topic_id);
  p.n_headlines = mentions_per_headline.size();
  for (auto& [key, a] : acc) {
    EntityStat s;
    s.key = key;
    if (a.aliased) {
      s.canonical = a.alias_target;
    } else {
      // Most frequent spelling; ties go to the lexicographically smallest.
      std::size_t best = 0;
      for (const auto& [form, votes] : a.display_votes) {
        if (votes > best) {
          best = votes;
          s.canonical = form;
        }
      }
    }
    s.surface_forms = std::move(a.surfaces);
    s.type = static_cast<EntityType>(std::max_element(a.type_votes.begin(), a.type_votes.end()) - a.type_votes.begin());
    s.count = a.count;
    s.per_1000 = p.n_headlines ? 1000.0 * static_cast<double>(a.count) / static_cast<double>(p.n_headlines) : 0.0;
    p.entities.push_back(std::move(s));
  }
  std::sort(p.entities.begin(), p.entities.end(), [](const EntityStat& a, const EntityStat& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.canonical < b.canonical;
  });
  return p;
}

std::vector<EntityStat> top_k_entities(const EntityProfile& profile, std::size_t k) {
  if (k < 1) throw PreconditionError("top-k needs k >= 1");
  std::vector<EntityStat> ranked = profile.entities;
  std::sort(ranked.begin(), ranked.end(), [](const EntityStat& a, const EntityStat& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.canonical < b.canonical;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::optional<NormalizedEntityView> cross_model_normalize(std::span<const EntityProfile> profiles,
                                                          std::string_view entity, std::size_t k) {
  if (profiles.size() < 2) throw PreconditionError("cross-model normalization needs at least two profiles");
  NormalizedEntityView v;
  v.key = fold_entity(entity);
  std::size_t total = 0;
  std::size_t top_hits = 0;
  for (const auto& p : profiles) {
    v.models.push_back(p.model_id);
    const auto* stat = p.find(v.key);
    const std::size_t c = stat ? stat->count : 0;
    if (stat && v.canonical.empty()) v.canonical = stat->canonical;
    v.counts.push_back(c);
    total += c;
    bool in_top = false;
    if (stat) {
      for (const auto& t : top_k_entities(p, k)) in_top = in_top || t.key == v.key;
    }
    v.in_top_k.push_back(in_top);
    top_hits += in_top ? 1 : 0;
  }
  if (v.canonical.empty()) v.canonical = std::string(entity);
  if (total == 0) {
    log::warn("entity '" + std::string(entity) + "' has zero mentions across models; not normalized");
    return std::nullopt;
  }
  v.mean = static_cast<double>(total) / static_cast<double>(profiles.size());
  for (auto c : v.counts) v.ratios.push_back(static_cast<double>(c) / v.mean);
  v.unique = top_hits == 1;
  return v;
}

std::vector<std::string> top_k_union(std::span<const EntityProfile> profiles, std::size_t k) {
  std::set<std::string> keys;
  for (const auto& p : profiles) {
    for (const auto& e : top_k_entities(p, k)) keys.insert(e.key);
  }
  return {keys.begin(), keys.end()};
}

Json to_json(const EntityProfile& p) {
  Json entities = Json::array();
  for (const auto& e : p.entities) {
    entities.push_back(Json{{"canonical", e.canonical},
                            {"key", e.key},
                            {"surface_forms", e.surface_forms},
                            {"entity_type", std::string(to_string(e.type))},
                            {"count", e.count},
                            {"per_1000", e.per_1000}});
  }
  return Json{{"model", p.model_id}, {"topic", p.topic_id}, {"n_headlines", p.n_headlines}, {"entities", entities}};
}

EntityProfile entity_profile_from_json(const Json& j) {
  EntityProfile p;
  p.model_id = j.at("model").get<std::string>();
  p.topic_id = j.at("topic").get<std::string>();
  p.n_headlines = j.at("n_headlines").get<std::size_t>();
  for (const auto& e : j.at("entities")) {
    EntityStat s;
    s.canonical = e.at("canonical").get<std::string>();
    s.key = e.at("key").get<std::string>();
    s.surface_forms = e.at("surface_forms").get<std::set<std::string>>();
    s.type = entity_type_from_string(e.at("entity_type").get<std::string>()).value_or(EntityType::kMisc);
    s.count = e.at("count").get<std::size_t>();
    s.per_1000 = e.at("per_1000").get<double>();
    p.entities.push_back(std::move(s));
  }
  return p;
}

Json to_json(const NormalizedEntityView& v) {
  Json per_model = Json::array();
  for (std::size_t i = 0; i < v.models.size(); ++i) {
    per_model.push_back(Json{{"model", v.models[i]},
                             {"count", v.counts[i]},
                             {"ratio", v.ratios.empty() ? 0.0 : v.ratios[i]},
                             {"in_top_k", static_cast<bool>(v.in_top_k[i])}});
  }
  return Json{{"canonical", v.canonical}, {"key", v.key}, {"mean", v.mean}, {"unique", v.unique}, {"per_model", per_model}};
}

}  // namespace polbias::framing
