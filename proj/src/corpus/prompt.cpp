#include "polbias/corpus/prompt.hpp"

#include "polbias/common/errors.hpp"

namespace polbias::corpus {

std::string fill_template(std::string_view templ, std::string_view topic, std::string_view stance) {
  static constexpr std::string_view kTopic = "{topic}";
  static constexpr std::string_view kStance = "{stance}";
  std::string out;
  out.reserve(templ.size() + topic.size() + 2 * stance.size());
  std::size_t i = 0;
  while (i < templ.size()) {
    if (templ.substr(i, kTopic.size()) == kTopic) {
      out.append(topic);
      i += kTopic.size();
    } else if (templ.substr(i, kStance.size()) == kStance) {
      out.append(stance);
      i += kStance.size();
    } else {
      out.push_back(templ[i++]);
    }
  }
  return out;
}

PromptSpec render_task_prompt(const TopicSpec& topic) {
  return PromptSpec{std::string(kTaskTemplate), fill_template(kTaskTemplate, topic.name, ""),
                    Condition::kNeutral};
}

PromptSpec render_anchor_prompt(const TopicSpec& topic, Side side) {
  if (!topic.is_policy() || !topic.anchors) {
    throw UnsupportedOperationError("topic '" + topic.id + "' is an event; stance anchors are not generated");
  }
  const std::string& tag = topic.anchors->tag(side);
  return PromptSpec{std::string(kAnchorTemplate), fill_template(kAnchorTemplate, topic.name, tag),
                    condition_of(side)};
}

std::string separator_tag(const TopicSpec& topic, Condition condition) {
  if (condition == Condition::kNeutral) return "Title:";
  if (!topic.anchors) {
    throw UnsupportedOperationError("topic '" + topic.id + "' has no stance tags");
  }
  return topic.anchors->tag(condition == Condition::kPro ? Side::kPro : Side::kOpp) + " Title:";
}

}  // namespace polbias::corpus
