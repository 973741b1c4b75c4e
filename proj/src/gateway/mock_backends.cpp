#include "polbias/gateway/mock_backends.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "polbias/common/errors.hpp"
#include "polbias/common/random.hpp"
#include "polbias/gateway/transport.hpp"

namespace polbias::gateway {
namespace {

constexpr std::array<std::string_view, 8> kProVerbs{"Expands", "Protects", "Champions", "Strengthens",
                                                    "Celebrates", "Secures", "Advances", "Welcomes"};
constexpr std::array<std::string_view, 8> kOppVerbs{"Bans", "Restricts", "Condemns", "Blocks",
                                                    "Repeals", "Rejects", "Halts", "Slashes"};
constexpr std::array<std::string_view, 8> kProNouns{"Rights", "Access", "Equality", "Progress",
                                                    "Protections", "Freedom", "Support", "Victory"};
constexpr std::array<std::string_view, 8> kOppNouns{"Crisis", "Threat", "Dangers", "Burden",
                                                    "Costs", "Failures", "Risks", "Backlash"};
constexpr std::array<std::string_view, 6> kNeutralVerbs{"Debates", "Reviews", "Examines",
                                                         "Reports On", "Discusses", "Weighs"};
constexpr std::array<std::string_view, 6> kNeutralNouns{"Plans", "Timeline", "Questions",
                                                        "Developments", "Talks", "Outlook"};
constexpr std::array<std::string_view, 8> kSubjects{"Supreme Court", "Congress", "White House", "US",
                                                    "Lawmakers", "Activists", "Voters", "Experts"};
constexpr std::array<std::string_view, 5> kLoaded{"Shocking", "Outrageous", "Disastrous", "Radical",
                                                  "Reckless"};

std::string slug(std::string_view s) {
  std::string out;
  for (unsigned char c : s) out.push_back(std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_');
  return out;
}

std::string after(std::string_view text, std::string_view marker, std::string_view until) {
  const auto b = text.find(marker);
  if (b == std::string_view::npos) return {};
  const auto start = b + marker.size();
  const auto e = text.find(until, start);
  return std::string(text.substr(start, e == std::string_view::npos ? std::string_view::npos : e - start));
}

std::string prompt_of(const Json& request) {
  const auto& messages = request.at("messages");
  if (!messages.is_array() || messages.empty()) throw AttemptError({"request has no messages", false});
  return messages.back().at("content").get<std::string>();
}

class MockHeadlineModel final : public Backend {
 public:
  MockHeadlineModel(EndpointConfig endpoint, std::vector<corpus::TopicSpec> topics)
      : endpoint_(std::move(endpoint)), topics_(std::move(topics)) {
    const auto& o = endpoint_.options;
    if (o.contains("lean")) {
      for (const auto& [k, v] : o.at("lean").items()) lean_[slug(k)] = v.get<double>();
    }
    if (o.contains("entities")) {
      for (const auto& e : o.at("entities")) preferred_.push_back(e.get<std::string>());
    }
    loaded_rate_ = o.value("loaded_rate", 0.0);
    shortfall_rate_ = o.value("shortfall_rate", 0.0);
    numbered_rate_ = o.value("numbered_rate", 0.3);
  }

  std::string id() const override { return "mock-headlines/v1#" + endpoint_.model_name; }

  Json call(CallKind kind, const Json& request) override {
    if (kind != CallKind::kGenerate) throw AttemptError({"headline mock only generates", false});
    const std::string prompt = prompt_of(request);
    auto rng = make_stream(request.value("seed", std::uint64_t{0}), {"mock-generate", endpoint_.model_name, prompt});

    // Anchor prompts: "Write 10 <tag> news headlines about the topic of <name>. ..."
    std::string tag;
    std::string name;
    if (prompt.find("about the topic of \"") != std::string::npos) {
      name = after(prompt, "about the topic of \"", "\"");
    } else {
      tag = after(prompt, "Write 10 ", " news headlines");
      name = after(prompt, "about the topic of ", ". Separate");
    }
    const corpus::TopicSpec* topic = nullptr;
    for (const auto& t : topics_) {
      if (t.name == name) topic = &t;
    }
    double p_pro = 0.5;
    std::string separator = "Title:";
    if (!tag.empty()) {
      separator = tag + " Title:";
      if (topic && topic->anchors) {
        p_pro = tag == topic->anchors->pro_tag ? 1.0 : 0.0;
      }
    } else if (topic) {
      p_pro = lean_for(*topic);
    }
    const bool event = topic && !topic->is_policy();

    int count = 10;
    if (unit_uniform(rng) < shortfall_rate_) count = 7 + static_cast<int>(pick_index(rng, 3));
    std::string text = "Here are " + std::to_string(count) + " news headlines about " + name + ":\n\n";
    for (int i = 0; i < count; ++i) {
      std::string h = headline(rng, name, event, unit_uniform(rng) < p_pro);
      if (unit_uniform(rng) < numbered_rate_) h = std::to_string(i + 1) + ". " + h;
      if (unit_uniform(rng) < 0.1) h = "\"" + h + "\"";
      text += separator + " " + h + "\n";
    }
    text += "\nI hope these headlines are helpful.";
    return Json{{"text", text}};
  }

 private:
  double lean_for(const corpus::TopicSpec& topic) const {
    if (auto it = lean_.find(slug(topic.id)); it != lean_.end()) return it->second;
    if (auto it = lean_.find(slug(topic.name)); it != lean_.end()) return it->second;
    if (auto it = lean_.find("default"); it != lean_.end()) return it->second;
    return 0.5;
  }

  std::string subject(RandomStream& rng) const {
    if (!preferred_.empty() && unit_uniform(rng) < 0.5) return preferred_[pick_index(rng, preferred_.size())];
    return std::string(kSubjects[pick_index(rng, kSubjects.size())]);
  }

  std::string headline(RandomStream& rng, const std::string& name, bool event, bool pro) const {
    const std::string who = subject(rng);
    std::string_view verb;
    std::string_view noun;
    if (event) {
      verb = kNeutralVerbs[pick_index(rng, kNeutralVerbs.size())];
      noun = kNeutralNouns[pick_index(rng, kNeutralNouns.size())];
    } else if (pro) {
      verb = kProVerbs[pick_index(rng, kProVerbs.size())];
      noun = kProNouns[pick_index(rng, kProNouns.size())];
    } else {
      verb = kOppVerbs[pick_index(rng, kOppVerbs.size())];
      noun = kOppNouns[pick_index(rng, kOppNouns.size())];
    }
    std::string adjective;
    if (unit_uniform(rng) < loaded_rate_) adjective = std::string(kLoaded[pick_index(rng, kLoaded.size())]) + " ";
    if (pick_index(rng, 2) == 0) {
      return who + " " + std::string(verb) + " " + name + " " + adjective + std::string(noun);
    }
    return name + " " + adjective + std::string(noun) + ": " + who + " " + std::string(verb) + " New Measures";
  }

  EndpointConfig endpoint_;
  std::vector<corpus::TopicSpec> topics_;
  std::map<std::string, double> lean_;
  std::vector<std::string> preferred_;
  double loaded_rate_ = 0.0;
  double shortfall_rate_ = 0.0;
  double numbered_rate_ = 0.3;
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class HashingEmbedder final : public Backend {
 public:
  explicit HashingEmbedder(EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {
    dim_ = endpoint_.options.value("dim", 256);
    if (dim_ <= 0) throw ConfigError("mock embedder dim must be positive");
  }

  std::string id() const override { return "mock-hash-embed/v1#" + endpoint_.model_name + "@" + std::to_string(dim_); }

  Json call(CallKind kind, const Json& request) override {
    if (kind != CallKind::kEmbed) throw AttemptError({"embedder only embeds", false});
    const auto text = request.at("input").get<std::string>();
    std::vector<double> v(static_cast<std::size_t>(dim_), 0.0);
    const auto tokens = word_tokens(text);
    auto add = [&](const std::string& feature, double weight) {
      const auto h = fnv1a(feature);
      const auto idx = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim_));
      v[idx] += ((h >> 63) != 0 ? -weight : weight);
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      add(tokens[i], 1.0);
      if (i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1], 0.5);
    }
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) add("<empty>" + text, 1.0);
    return Json{{"embedding", v}};
  }

 private:
  EndpointConfig endpoint_;
  int dim_ = 256;
};

struct FrameRule {
  std::string_view keyword;
  Frame frame;
};

const std::vector<FrameRule>& frame_rules() {
  static const std::vector<FrameRule> rules{
      {"cost", Frame::kEconomic},          {"costs", Frame::kEconomic},
      {"economy", Frame::kEconomic},       {"prices", Frame::kEconomic},
      {"budget", Frame::kCapacityAndResources}, {"resources", Frame::kCapacityAndResources},
      {"pope", Frame::kMorality},          {"moral", Frame::kMorality},
      {"church", Frame::kMorality},        {"equality", Frame::kFairnessAndEquality},
      {"rights", Frame::kFairnessAndEquality}, {"court", Frame::kConstitutionalityAndJurisprudence},
      {"ruling", Frame::kConstitutionalityAndJurisprudence}, {"measures", Frame::kPolicyPrescriptionAndEvaluation},
      {"reform", Frame::kPolicyPrescriptionAndEvaluation}, {"plans", Frame::kPolicyPrescriptionAndEvaluation},
      {"crime", Frame::kLawAndOrder},      {"police", Frame::kLawAndOrder},
      {"bans", Frame::kLawAndOrder},       {"threat", Frame::kSecurityAndDefense},
      {"war", Frame::kSecurityAndDefense}, {"health", Frame::kHealthAndSafety},
      {"dangers", Frame::kHealthAndSafety}, {"risks", Frame::kHealthAndSafety},
      {"freedom", Frame::kQualityOfLife},  {"families", Frame::kQualityOfLife},
      {"identity", Frame::kCulturalIdentity}, {"tradition", Frame::kCulturalIdentity},
      {"voters", Frame::kPublicOpinion},   {"poll", Frame::kPublicOpinion},
      {"activists", Frame::kPublicOpinion}, {"backlash", Frame::kPublicOpinion},
      {"congress", Frame::kPolitical},     {"lawmakers", Frame::kPolitical},
      {"white", Frame::kPolitical},        {"senate", Frame::kPolitical},
      {"un", Frame::kExternalRegulationAndReputation}, {"international", Frame::kExternalRegulationAndReputation},
  };
  return rules;
}

class MockFrameClassifier final : public Backend {
 public:
  explicit MockFrameClassifier(EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}
  std::string id() const override { return "mock-frame-rules/v1#" + endpoint_.model_name; }

  Json call(CallKind kind, const Json& request) override {
    if (kind != CallKind::kClassifyFrames) throw AttemptError({"frame mock only classifies frames", false});
    const std::string prompt = prompt_of(request);
    const std::string block = after(prompt, "Headlines:\n", "Categorize each headline");
    std::string reply;
    std::size_t start = 0;
    while (start < block.size()) {
      auto nl = block.find('\n', start);
      if (nl == std::string::npos) nl = block.size();
      const std::string line = block.substr(start, nl - start);
      start = nl + 1;
      const auto dot = line.find(". ");
      if (dot == std::string::npos) continue;
      const std::string index = line.substr(0, dot);
      std::set<Frame> frames;
      for (const auto& token : word_tokens(line.substr(dot + 2))) {
        for (const auto& rule : frame_rules()) {
          if (token == rule.keyword) frames.insert(rule.frame);
        }
      }
      reply += index + ". Classes: [";
      bool first = true;
      for (auto f : frames) {
        if (!first) reply += ", ";
        reply += "'" + std::string(frame_name(f)) + "'";
        first = false;
      }
      reply += "]\n";
    }
    return Json{{"text", reply}};
  }

 private:
  EndpointConfig endpoint_;
};

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-'; }

class GazetteerTagger final : public Backend {
 public:
  explicit GazetteerTagger(EndpointConfig endpoint) : endpoint_(std::move(endpoint)), entries_(default_gazetteer()) {
    if (endpoint_.options.contains("gazetteer")) {
      for (const auto& [surface, type] : endpoint_.options.at("gazetteer").items()) {
        const auto t = entity_type_from_string(type.get<std::string>());
        if (!t) throw ConfigError("mock gazetteer: unknown entity type for '" + surface + "'");
        entries_.push_back({surface, *t});
      }
    }
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const auto& a, const auto& b) { return a.surface.size() > b.surface.size(); });
  }

  std::string id() const override { return "mock-gazetteer-ner/v1#" + endpoint_.model_name; }

  Json call(CallKind kind, const Json& request) override {
    if (kind != CallKind::kExtractEntities) throw AttemptError({"tagger only extracts entities", false});
    const auto text = request.at("text").get<std::string>();
    std::vector<bool> used(text.size(), false);
    struct Hit {
      std::size_t start, end;
      const GazetteerEntry* entry;
    };
    std::vector<Hit> hits;
    for (const auto& entry : entries_) {
      std::size_t pos = 0;
      while ((pos = text.find(entry.surface, pos)) != std::string::npos) {
        const auto end = pos + entry.surface.size();
        const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
        const bool right_ok = end == text.size() || !is_word_char(text[end]);
        const bool free = std::none_of(used.begin() + static_cast<long>(pos), used.begin() + static_cast<long>(end),
                                       [](bool b) { return b; });
        if (left_ok && right_ok && free) {
          std::fill(used.begin() + static_cast<long>(pos), used.begin() + static_cast<long>(end), true);
          hits.push_back({pos, end, &entry});
        }
        pos = end;
      }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.start < b.start; });
    Json entities = Json::array();
    for (const auto& h : hits) {
      entities.push_back(Json{{"text", text.substr(h.start, h.end - h.start)},
                              {"type", std::string(to_string(h.entry->type))},
                              {"start", h.start},
                              {"end", h.end}});
    }
    return Json{{"entities", entities}};
  }

 private:
  EndpointConfig endpoint_;
  std::vector<GazetteerEntry> entries_;
};

const std::set<std::string>& positive_words() {
  static const std::set<std::string> words{
      "finally", "equality", "celebrate", "celebrates", "champions", "expands", "protects", "secures",
      "advances", "welcomes", "strengthens", "victory", "progress", "freedom", "support", "supports",
      "love", "triumph", "breakthrough", "historic", "embrace", "rights", "protections", "access", "wins"};
  return words;
}

const std::set<std::string>& negative_words() {
  static const std::set<std::string> words{
      "bans", "ban", "restricts", "condemns", "blocks", "repeals", "rejects", "halts", "slashes",
      "crisis", "threat", "dangers", "burden", "failures", "risks", "backlash", "undermines",
      "struck", "critics", "shocking", "outrageous", "disastrous", "reckless", "radical", "costs"};
  return words;
}

class LexiconSentiment final : public Backend {
 public:
  explicit LexiconSentiment(EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}
  std::string id() const override { return "mock-lexicon-tsc/v1#" + endpoint_.model_name; }

  Json call(CallKind kind, const Json& request) override {
    if (kind != CallKind::kTargetSentiment) throw AttemptError({"sentiment mock only scores targets", false});
    std::string text = request.at("text").get<std::string>();
    const auto target = request.at("target").get<std::string>();
    if (auto pos = text.find(target); pos != std::string::npos) text.replace(pos, target.size(), " ");
    int score = 0;
    for (const auto& token : word_tokens(text)) {
      if (positive_words().count(token)) ++score;
      if (negative_words().count(token)) --score;
    }
    const Polarity p = score > 0 ? Polarity::kPositive : score < 0 ? Polarity::kNegative : Polarity::kNeutral;
    return Json{{"label", std::string(to_string(p))}};
  }

 private:
  EndpointConfig endpoint_;
};

class LexiconMediaBias final : public Backend {
 public:
  explicit LexiconMediaBias(EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}
  std::string id() const override { return "mock-lexicon-mediabias/v1#" + endpoint_.model_name; }

  Json call(CallKind kind, const Json& request) override {
    if (kind != CallKind::kMediaBias) throw AttemptError({"media-bias mock only labels bias", false});
    static const std::set<std::string> loaded{"shocking",  "outrageous", "disastrous", "radical", "reckless",
                                              "slams",     "destroys",   "insane",     "disgrace", "chaos",
                                              "infallible", "shocks"};
    bool biased = false;
    for (const auto& token : word_tokens(request.at("text").get<std::string>())) {
      if (loaded.count(token)) biased = true;
    }
    return Json{{"label", std::string(to_string(biased ? MediaBiasLabel::kBiased : MediaBiasLabel::kUnbiased))}};
  }

 private:
  EndpointConfig endpoint_;
};

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

const std::vector<GazetteerEntry>& default_gazetteer() {
  static const std::vector<GazetteerEntry> entries{
      {"Supreme Court", EntityType::kOrg},
      {"Congress", EntityType::kOrg},
      {"Senate", EntityType::kOrg},
      {"White House", EntityType::kOrg},
      {"United Nations", EntityType::kOrg},
      {"European Union", EntityType::kOrg},
      {"Vatican", EntityType::kOrg},
      {"NRA", EntityType::kOrg},
      {"FDA", EntityType::kOrg},
      {"UK Parliament", EntityType::kOrg},
      {"Pope Francis", EntityType::kPer},
      {"President Obama", EntityType::kPer},
      {"Obama", EntityType::kPer},
      {"Trump", EntityType::kPer},
      {"Biden", EntityType::kPer},
      {"US", EntityType::kLoc},
      {"United States", EntityType::kLoc},
      {"UAE", EntityType::kLoc},
      {"United Arab Emirates", EntityType::kLoc},
      {"Australia", EntityType::kLoc},
      {"Canada", EntityType::kLoc},
      {"China", EntityType::kLoc},
      {"California", EntityType::kLoc},
      {"Texas", EntityType::kLoc},
      {"Ohio", EntityType::kLoc},
      {"Michigan", EntityType::kLoc},
      {"Pennsylvania", EntityType::kLoc},
      {"Ireland", EntityType::kLoc},
      {"Brazil", EntityType::kLoc},
      {"Mexico", EntityType::kLoc},
      {"Taiwan", EntityType::kLoc},
      {"New Zealand", EntityType::kLoc},
      {"Hong Kong", EntityType::kLoc},
      {"Russia", EntityType::kLoc},
      {"Ukraine", EntityType::kLoc},
      {"Gulf", EntityType::kLoc},
      {"LGBTQ", EntityType::kMisc},
      {"LGBT", EntityType::kMisc},
      {"Same-Sex Couples", EntityType::kMisc},
      {"Same Sex Marriage Ban", EntityType::kMisc},
      {"Catholic", EntityType::kMisc},
  };
  return entries;
}

std::shared_ptr<Backend> make_mock_backend(const EndpointConfig& endpoint, CallKind role,
                                           const std::vector<corpus::TopicSpec>& topics) {
  switch (role) {
    case CallKind::kGenerate: return std::make_shared<MockHeadlineModel>(endpoint, topics);
    case CallKind::kEmbed: return std::make_shared<HashingEmbedder>(endpoint);
    case CallKind::kClassifyFrames: return std::make_shared<MockFrameClassifier>(endpoint);
    case CallKind::kExtractEntities: return std::make_shared<GazetteerTagger>(endpoint);
    case CallKind::kTargetSentiment: return std::make_shared<LexiconSentiment>(endpoint);
    case CallKind::kMediaBias: return std::make_shared<LexiconMediaBias>(endpoint);
  }
  throw ConfigError("no mock backend for role");
}

}  // namespace polbias::gateway
