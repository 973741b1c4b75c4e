#include "polbias/corpus/headline.hpp"

#include <array>

#include "polbias/common/errors.hpp"

namespace polbias::corpus {
namespace {

constexpr std::string_view kSpace = " \t\r\n\f\v";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

bool starts_with_any(std::string_view s, std::string_view& matched,
                     std::initializer_list<std::string_view> prefixes) {
  for (auto p : prefixes) {
    if (s.starts_with(p)) {
      matched = p;
      return true;
    }
  }
  return false;
}

// Removes one leading list marker ("1.", "2)", "-", "*", "•") followed by whitespace.
bool strip_list_marker(std::string_view& s) {
  std::size_t i = 0;
  while (i < s.size() && i < 3 && s[i] >= '0' && s[i] <= '9') ++i;
  if (i > 0) {
    if (i < s.size() && (s[i] == '.' || s[i] == ')' || s[i] == ':' || s[i] == ']')) {
      ++i;
      if (i == s.size() || kSpace.find(s[i]) != std::string_view::npos) {
        s = trim(s.substr(i));
        return true;
      }
    }
    return false;
  }
  std::string_view bullet;
  if (starts_with_any(s, bullet, {"\xE2\x80\xA2", "\xC2\xB7", "-", "*"})) {
    const auto rest = s.substr(bullet.size());
    if (rest.empty() || kSpace.find(rest.front()) != std::string_view::npos) {
      s = trim(rest);
      return true;
    }
  }
  return false;
}

struct QuotePair {
  std::string_view open;
  std::string_view close;
};

constexpr std::array<QuotePair, 6> kQuotes{{
    {"\"", "\""},
    {"'", "'"},
    {"\xE2\x80\x9C", "\xE2\x80\x9D"},  // curly double
    {"\xE2\x80\x98", "\xE2\x80\x99"},  // curly single
    {"**", "**"},
    {"*", "*"},
}};

// Removes a matching pair of surrounding quotes when the inner text holds no
// other copy of the closing quote.
bool strip_quotes(std::string_view& s) {
  for (const auto& q : kQuotes) {
    if (s.size() < q.open.size() + q.close.size()) continue;
    if (!s.starts_with(q.open) || !s.ends_with(q.close)) continue;
    auto inner = s.substr(q.open.size(), s.size() - q.open.size() - q.close.size());
    if (inner.find(q.close) != std::string_view::npos) continue;
    if (q.open != q.close && inner.find(q.open) != std::string_view::npos) continue;
    s = trim(inner);
    return true;
  }
  return false;
}

std::string_view first_nonempty_line(std::string_view s) {
  while (!s.empty()) {
    const auto nl = s.find('\n');
    auto line = trim(s.substr(0, nl));
    if (!line.empty()) return line;
    if (nl == std::string_view::npos) break;
    s.remove_prefix(nl + 1);
  }
  return {};
}

}  // namespace

std::string normalize_headline(std::string_view segment) {
  auto s = first_nonempty_line(segment);
  // Iterate to a fixed point so normalizing twice changes nothing.
  bool changed = true;
  while (changed && !s.empty()) {
    changed = strip_list_marker(s);
    changed = strip_quotes(s) || changed;
  }
  return std::string(s);
}

std::vector<std::string> parse_headline_texts(std::string_view raw_text, std::string_view tag) {
  if (tag.empty()) throw PreconditionError("separator tag must be non-empty");
  std::vector<std::string> out;
  auto pos = raw_text.find(tag);
  while (pos != std::string_view::npos) {
    const auto start = pos + tag.size();
    const auto next = raw_text.find(tag, start);
    const auto segment =
        raw_text.substr(start, next == std::string_view::npos ? std::string_view::npos : next - start);
    auto text = normalize_headline(segment);
    if (!text.empty()) out.push_back(std::move(text));
    pos = next;
  }
  return out;
}

ParsedHeadlines parse_headlines(const GenerationRecord& record, std::string_view tag) {
  ParsedHeadlines parsed;
  const auto texts = parse_headline_texts(record.raw_text, tag);
  HeadlineSource source{record.model_id, record.topic_id, record.condition, record.request_index};
  int position = 0;
  for (const auto& t : texts) parsed.headlines.push_back(Headline{t, source, position++});
  parsed.parse_warning = parsed.headlines.empty();
  return parsed;
}

std::string join_headlines(std::span<const std::string> headlines, std::string_view tag) {
  std::string out;
  for (const auto& h : headlines) {
    out.append(tag);
    out.push_back(' ');
    out.append(h);
    out.push_back('\n');
  }
  return out;
}

Json to_json(const GenerationRecord& r) {
  return Json{{"model", r.model_id},
              {"topic", r.topic_id},
              {"condition", std::string(to_string(r.condition))},
              {"request_index", r.request_index},
              {"raw_text", r.raw_text},
              {"sampling", {{"temperature", r.params.temperature},
                            {"max_tokens", r.params.max_tokens},
                            {"seed", r.params.seed}}},
              {"backend_id", r.backend_id},
              {"parse_warning", r.parse_warning}};
}

GenerationRecord generation_from_json(const Json& j) {
  GenerationRecord r;
  r.model_id = j.at("model").get<std::string>();
  r.topic_id = j.at("topic").get<std::string>();
  r.condition = parse_condition(j.at("condition").get<std::string>());
  r.request_index = j.at("request_index").get<int>();
  r.raw_text = j.at("raw_text").get<std::string>();
  const auto& s = j.at("sampling");
  r.params = SamplingParams{s.at("temperature").get<double>(), s.at("max_tokens").get<int>(),
                            s.at("seed").get<std::uint64_t>()};
  r.backend_id = j.value("backend_id", "");
  r.parse_warning = j.value("parse_warning", false);
  return r;
}

Json to_json(const Headline& h) {
  return Json{{"model", h.source.model_id},
              {"topic", h.source.topic_id},
              {"condition", std::string(to_string(h.source.condition))},
              {"request_index", h.source.request_index},
              {"position", h.position},
              {"text", h.text}};
}

Headline headline_from_json(const Json& j) {
  Headline h;
  h.text = j.at("text").get<std::string>();
  h.source.model_id = j.at("model").get<std::string>();
  h.source.topic_id = j.at("topic").get<std::string>();
  h.source.condition = parse_condition(j.at("condition").get<std::string>());
  h.source.request_index = j.at("request_index").get<int>();
  h.position = j.at("position").get<int>();
  return h;
}

}  // namespace polbias::corpus
