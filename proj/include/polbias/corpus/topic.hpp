#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polbias/common/json_io.hpp"

namespace polbias::corpus {

enum class TopicKind { kPolicy, kEvent };

// Generation condition: the plain task prompt, or one of the two anchor prompts.
enum class Condition { kNeutral, kPro, kOpp };

enum class Side { kPro, kOpp };

std::string_view to_string(TopicKind kind);
std::string_view to_string(Condition condition);
std::string_view to_string(Side side);
Condition parse_condition(std::string_view text);
constexpr Condition condition_of(Side side) { return side == Side::kPro ? Condition::kPro : Condition::kOpp; }

struct StanceTags {
  std::string pro_tag;
  std::string opp_tag;

  const std::string& tag(Side side) const { return side == Side::kPro ? pro_tag : opp_tag; }
};

struct TopicSpec {
  std::string id;
  std::string name;
  TopicKind kind = TopicKind::kPolicy;
  // Present exactly for policy topics; events carry no stance anchors.
  std::optional<StanceTags> anchors;

  bool is_policy() const { return kind == TopicKind::kPolicy; }
};

// Ten policy topics followed by four political events.
std::vector<TopicSpec> default_topics();

// Reads the "topics" array of a config document. A document without the key
// yields the built-in defaults. Throws ConfigError on duplicates, missing
// fields, empty lists, or anchor/kind mismatches.
std::vector<TopicSpec> load_topics(const Json& config_document);

// Throws ConfigError if the topic breaks a TopicSpec invariant.
void validate_topic(const TopicSpec& topic);

Json to_json(const TopicSpec& topic);

}  // namespace polbias::corpus
