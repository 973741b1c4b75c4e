#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/gateway/gateway.hpp"
#include "polbias/gateway/labels.hpp"

namespace polbias::framing {

using gateway::EntityMention;

// Maps a case-folded variant to the canonical display form it merges into,
// e.g. "us" -> "United States". Empty by default: no aliasing.
class AliasTable {
 public:
  AliasTable() = default;
  static AliasTable from_json(const Json& j);  // {"variant": "Canonical", ...}

  void add(std::string_view variant, std::string canonical);
  const std::string* find(std::string_view folded_key) const;
  bool empty() const { return map_.empty(); }
  Json to_json() const;

 private:
  std::map<std::string, std::string> map_;
};

struct CanonicalMention {
  std::string key;        // case-folded, possessive-free identity
  std::string surface;    // cleaned surface as written
  std::string canonical;  // alias target, or the cleaned surface
  EntityType type = EntityType::kMisc;
};

// Case-fold key used to compare entity names.
std::string fold_entity(std::string_view text);

// Strips surrounding punctuation and possessives, then folds case and applies aliases.
CanonicalMention canonicalize(const EntityMention& mention, const AliasTable& aliases = {});
std::vector<CanonicalMention> canonicalize_entities(std::span<const EntityMention> mentions,
                                                    const AliasTable& aliases = {});

struct EntityStat {
  std::string canonical;  // display form
  std::string key;
  std::set<std::string> surface_forms;
  EntityType type = EntityType::kMisc;
  std::size_t count = 0;
  double per_1000 = 0.0;  // mentions per 1000 headlines
};

struct EntityProfile {
  std::string model_id;
  std::string topic_id;
  std::size_t n_headlines = 0;
  // Ordered by count (descending), then canonical form.
  std::vector<EntityStat> entities;

  const EntityStat* find(std::string_view key) const;
};

// Aggregates the mentions of every headline. Each mention counts once.
EntityProfile build_entity_profile(std::span<const std::vector<EntityMention>> mentions_per_headline,
                                   const AliasTable& aliases, std::string model_id, std::string topic_id);

// Top k by count, ties broken lexicographically by canonical form.
std::vector<EntityStat> top_k_entities(const EntityProfile& profile, std::size_t k);

struct NormalizedEntityView {
  std::string canonical;
  std::string key;
  std::vector<std::string> models;
  std::vector<std::size_t> counts;  // absent models count 0
  double mean = 0.0;
  std::vector<double> ratios;  // count / mean
  std::vector<bool> in_top_k;
  bool unique = false;  // in exactly one model's top-k
};

// Normalizes one entity's counts by the mean over all given profiles.
// Returns nullopt (after a warning) when the mean is zero.
std::optional<NormalizedEntityView> cross_model_normalize(std::span<const EntityProfile> profiles,
                                                          std::string_view entity, std::size_t k = 10);

// Keys of every entity that appears in at least one profile's top-k, sorted.
std::vector<std::string> top_k_union(std::span<const EntityProfile> profiles, std::size_t k);

Json to_json(const EntityProfile& p);
EntityProfile entity_profile_from_json(const Json& j);
Json to_json(const NormalizedEntityView& v);

}  // namespace polbias::framing
