#include "polbias/gateway/gateway.hpp"

#include <algorithm>
#include <regex>

#include "polbias/common/errors.hpp"
#include "polbias/common/log.hpp"

namespace polbias::gateway {

CallSite::CallSite(EndpointConfig endpoint, std::shared_ptr<Backend> backend, std::shared_ptr<ArtifactCache> cache,
                   Mode mode)
    : endpoint_(std::move(endpoint)),
      backend_(std::move(backend)),
      cache_(std::move(cache)),
      mode_(mode),
      limiter_(shared_rate_limiter(endpoint_)),
      retry_(endpoint_.max_retries) {
  if (!cache_) throw Error("call site '" + endpoint_.id + "' has no cache");
  if (mode_ == Mode::kLive && !backend_) throw Error("live call site '" + endpoint_.id + "' has no backend");
}

CallSite::Result CallSite::call(CallKind kind, const Json& payload, std::uint64_t seed) {
  const CacheKey key = make_cache_key(kind, endpoint_.model_name, payload, seed);
  if (auto env = cache_->lookup(key)) return Result{env->response, env->backend_id, true};
  if (mode_ == Mode::kReplay || !backend_) throw MissingArtifactError(key.hex);

  const Json response = retry_.run(std::string(to_string(kind)) + " via '" + endpoint_.id + "'", [&](int) {
    limiter_->acquire();
    ++backend_calls_;
    return backend_->call(kind, payload);
  });
  const Json request{{"kind", std::string(to_string(kind))},
                     {"model", endpoint_.model_name},
                     {"payload", payload},
                     {"seed", seed}};
  cache_->store(key, Envelope{request, response, utc_timestamp(), backend_->id()});
  // A concurrent writer may have won the race; the stored envelope is authoritative.
  auto stored = cache_->lookup(key);
  if (!stored) throw IntegrityError("cache write for key " + key.hex + " did not persist");
  return Result{stored->response, stored->backend_id, false};
}

std::vector<CallSite::Result> CallSite::call_embed(const std::vector<std::string>& texts) {
  std::vector<Result> results(texts.size());
  std::vector<CacheKey> keys;
  keys.reserve(texts.size());
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    keys.push_back(make_cache_key(CallKind::kEmbed, endpoint_.model_name, Json{{"input", texts[i]}}, 0));
    if (auto env = cache_->lookup(keys.back())) {
      results[i] = Result{env->response, env->backend_id, true};
    } else {
      misses.push_back(i);
    }
  }
  if (misses.empty()) return results;
  if (mode_ == Mode::kReplay || !backend_) throw MissingArtifactError(keys[misses.front()].hex);

  std::vector<std::string> batch;
  batch.reserve(misses.size());
  for (auto i : misses) batch.push_back(texts[i]);
  const Json replies = retry_.run("embed via '" + endpoint_.id + "'", [&](int) {
    limiter_->acquire();
    ++backend_calls_;
    return Json(backend_->embed_batch(endpoint_.model_name, batch));
  });
  if (!replies.is_array() || replies.size() != batch.size()) {
    throw IntegrityError("embedding backend returned the wrong number of vectors");
  }
  for (std::size_t j = 0; j < misses.size(); ++j) {
    const auto i = misses[j];
    const Json request{{"kind", "embed"},
                       {"model", endpoint_.model_name},
                       {"payload", Json{{"input", texts[i]}}},
                       {"seed", 0}};
    cache_->store(keys[i], Envelope{request, replies[j], utc_timestamp(), backend_->id()});
    auto stored = cache_->lookup(keys[i]);
    if (!stored) throw IntegrityError("cache write for key " + keys[i].hex + " did not persist");
    results[i] = Result{stored->response, stored->backend_id, false};
  }
  return results;
}

GenerationReply GenerationClient::generate(const corpus::PromptSpec& prompt, const corpus::SamplingParams& params) {
  const Json payload{{"model", site_->endpoint().model_name},
                     {"messages", Json::array({Json{{"role", "user"}, {"content", prompt.rendered}}})},
                     {"temperature", params.temperature},
                     {"max_tokens", params.max_tokens},
                     {"seed", params.seed}};
  auto result = site_->call(CallKind::kGenerate, payload, params.seed);
  if (!result.response.contains("text") || !result.response.at("text").is_string()) {
    throw IntegrityError("generation envelope lacks 'text'");
  }
  return GenerationReply{result.response.at("text").get<std::string>(), result.backend_id};
}

EmbeddingBatch Embedder::embed(const std::vector<std::string>& texts) {
  for (const auto& t : texts) {
    if (t.empty()) throw PreconditionError("cannot embed an empty text");
  }
  EmbeddingBatch out;
  out.vectors.reserve(texts.size());
  const std::size_t step = std::max<std::size_t>(1, batch_size_);
  for (std::size_t start = 0; start < texts.size(); start += step) {
    const auto end = std::min(texts.size(), start + step);
    std::vector<std::string> chunk(texts.begin() + static_cast<long>(start), texts.begin() + static_cast<long>(end));
    for (auto& r : site_->call_embed(chunk)) {
      if (!r.response.contains("embedding") || !r.response.at("embedding").is_array()) {
        throw IntegrityError("embedding envelope lacks an 'embedding' array");
      }
      std::vector<double> values;
      try {
        values = r.response.at("embedding").get<std::vector<double>>();
      } catch (const Json::exception&) {
        throw IntegrityError("embedding contains non-numeric entries");
      }
      if (!out.vectors.empty() && values.size() != out.vectors.front().dim()) {
        throw IntegrityError("embedding dimension mismatch: " + std::to_string(values.size()) + " vs " +
                             std::to_string(out.vectors.front().dim()));
      }
      out.vectors.push_back(normalize(std::move(values)));
      if (out.backend_id.empty()) out.backend_id = r.backend_id;
    }
  }
  return out;
}

std::string render_frame_prompt(std::span<const std::string> headlines, std::string_view topic_name) {
  std::string prompt = "Classes: [";
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    if (i) prompt += ", ";
    prompt += "'" + std::string(kFrameNames[i]) + "'";
  }
  prompt += "]\nHeadlines:\n";
  for (std::size_t i = 0; i < headlines.size(); ++i) {
    prompt += std::to_string(i + 1) + ". " + headlines[i] + "\n";
  }
  prompt += "Categorize each headline related to " + std::string(topic_name) +
            " into one or more of the above-predefined classes. Format outputs as \"Classes: []\" and only output "
            "categories.\nPrefix each output line with the headline number.";
  return prompt;
}

namespace {

std::optional<FrameSet> parse_class_list(std::string content) {
  static const std::regex quoted(R"re('([^']*)'|"([^"]*)")re");
  FrameSet set;
  bool any_quoted = false;
  std::string residual;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(content.begin(), content.end(), quoted); it != std::sregex_iterator(); ++it) {
    any_quoted = true;
    const auto& m = *it;
    residual += content.substr(last, static_cast<std::size_t>(m.position()) - last);
    last = static_cast<std::size_t>(m.position() + m.length());
    const std::string label = m[1].matched ? m[1].str() : m[2].str();
    const auto frame = frame_from_name(label);
    if (!frame) return std::nullopt;
    set.insert(*frame);
  }
  residual += content.substr(last);
  if (!any_quoted) {
    // Unquoted list: peel off known names, longest first.
    std::vector<std::size_t> order(kFrameCount);
    for (std::size_t i = 0; i < kFrameCount; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [](auto a, auto b) { return kFrameNames[a].size() > kFrameNames[b].size(); });
    std::string lowered = residual;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (auto i : order) {
      std::string name(kFrameNames[i]);
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      std::size_t pos;
      while ((pos = lowered.find(name)) != std::string::npos) {
        set.insert(static_cast<Frame>(i));
        lowered.replace(pos, name.size(), std::string(name.size(), ' '));
      }
    }
    residual = lowered;
  }
  if (residual.find_first_not_of(" \t,;") != std::string::npos) return std::nullopt;
  return set;
}

}  // namespace

std::vector<std::optional<FrameSet>> parse_frame_reply(std::string_view reply, std::size_t expected) {
  static const std::regex line_re(R"(^\s*(?:(\d+)\s*[.):\-]?\s*)?Classes\s*:\s*\[(.*)\]\s*$)");
  std::vector<std::optional<FrameSet>> out(expected);
  std::vector<bool> seen(expected, false);
  std::size_t start = 0;
  const std::string text(reply);
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(start, nl - start);
    start = nl + 1;
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) continue;
    std::size_t index = 0;
    if (m[1].matched) {
      index = std::stoul(m[1].str());
    } else if (expected == 1) {
      index = 1;
    } else {
      continue;
    }
    if (index == 0 || index > expected || seen[index - 1]) continue;
    seen[index - 1] = true;
    out[index - 1] = parse_class_list(m[2].str());
  }
  return out;
}

std::vector<FrameAssignment> FrameClassifier::classify_frames(std::span<const corpus::Headline> headlines,
                                                              const corpus::TopicSpec& topic) {
  std::vector<FrameAssignment> out(headlines.size());
  const std::size_t step = std::max<std::size_t>(1, batch_size_);
  for (std::size_t start = 0; start < headlines.size(); start += step) {
    const auto end = std::min(headlines.size(), start + step);
    std::vector<std::string> texts;
    for (auto i = start; i < end; ++i) texts.push_back(headlines[i].text);
    const std::string prompt = render_frame_prompt(texts, topic.name);

    std::vector<std::optional<FrameSet>> parsed(texts.size());
    for (int attempt = 0; attempt < 2; ++attempt) {
      const Json payload{{"model", site_->endpoint().model_name},
                         {"messages", Json::array({Json{{"role", "user"}, {"content", prompt}}})},
                         {"temperature", 0.0},
                         {"max_tokens", max_tokens_},
                         {"seed", 0},
                         {"attempt", attempt}};
      auto result = site_->call(CallKind::kClassifyFrames, payload, 0);
      if (backend_id_.empty()) backend_id_ = result.backend_id;
      const auto reply = parse_frame_reply(result.response.value("text", std::string()), texts.size());
      bool missing = false;
      for (std::size_t j = 0; j < texts.size(); ++j) {
        if (!parsed[j]) parsed[j] = reply[j];
        missing = missing || !parsed[j];
      }
      if (!missing) break;
    }
    for (std::size_t j = 0; j < texts.size(); ++j) {
      auto& a = out[start + j];
      if (parsed[j]) {
        a.frames = parsed[j]->empty() ? FrameSet{Frame::kOther} : *parsed[j];
      } else {
        a.frames = FrameSet{Frame::kOther};
        a.parse_warning = true;
        log::warn("frame classifier reply unparseable for headline \"" + texts[j] + "\"; using {Other}");
      }
    }
  }
  return out;
}

bool sanitize_mentions(std::string_view text, std::vector<EntityMention>& mentions) {
  std::vector<EntityMention> kept;
  bool dropped = false;
  std::size_t cursor = 0;
  for (auto& m : mentions) {
    if (m.surface.empty()) {
      dropped = true;
      continue;
    }
    if (m.end > text.size() || m.begin >= m.end || text.substr(m.begin, m.end - m.begin) != m.surface) {
      // Offsets from some taggers count code points; re-anchor on the surface.
      const auto pos = text.find(m.surface, cursor);
      if (pos == std::string_view::npos) {
        dropped = true;
        continue;
      }
      m.begin = pos;
      m.end = pos + m.surface.size();
    }
    if (m.begin < cursor) {
      dropped = true;
      continue;
    }
    cursor = m.end;
    kept.push_back(std::move(m));
  }
  mentions = std::move(kept);
  return dropped;
}

EntityExtraction EntityTagger::extract_entities(const corpus::Headline& headline) {
  EntityExtraction out;
  CallSite::Result result;
  try {
    result = site_->call(CallKind::kExtractEntities,
                         Json{{"model", site_->endpoint().model_name}, {"text", headline.text}}, 0);
  } catch (const TransportError& e) {
    log::warn(std::string("entity tagger failed: ") + e.what());
    out.warning = true;
    return out;
  }
  out.backend_id = result.backend_id;
  const auto& entities = result.response.at("entities");
  for (const auto& e : entities) {
    EntityMention m;
    m.surface = e.value("text", std::string());
    m.type = entity_type_from_string(e.value("type", std::string("MISC"))).value_or(EntityType::kMisc);
    m.begin = e.value("start", std::size_t{0});
    m.end = e.value("end", std::size_t{0});
    out.mentions.push_back(std::move(m));
  }
  std::sort(out.mentions.begin(), out.mentions.end(),
            [](const EntityMention& a, const EntityMention& b) { return a.begin < b.begin; });
  if (sanitize_mentions(headline.text, out.mentions)) {
    out.warning = true;
    log::warn("dropped invalid entity spans for headline \"" + headline.text + "\"");
  }
  return out;
}

SentimentReply SentimentClassifier::target_sentiment(const corpus::Headline& headline,
                                                     const std::string& entity_surface) {
  if (entity_surface.empty() || headline.text.find(entity_surface) == std::string::npos) {
    throw PreconditionError("target '" + entity_surface + "' does not occur in \"" + headline.text + "\"");
  }
  const auto result = site_->call(
      CallKind::kTargetSentiment,
      Json{{"model", site_->endpoint().model_name}, {"text", headline.text}, {"target", entity_surface}}, 0);
  const auto label = polarity_from_string(result.response.value("label", std::string()));
  if (!label) throw IntegrityError("target-sentiment label outside {positive, negative, neutral}");
  return SentimentReply{*label, result.backend_id};
}

MediaBiasReply MediaBiasClassifier::classify_media_bias(const corpus::Headline& headline) {
  try {
    const auto result =
        site_->call(CallKind::kMediaBias, Json{{"model", site_->endpoint().model_name}, {"text", headline.text}}, 0);
    const auto label = media_bias_from_string(result.response.value("label", std::string()));
    if (!label) {
      log::warn("media-bias label outside {biased, unbiased}; headline excluded");
      return MediaBiasReply{std::nullopt, result.backend_id};
    }
    return MediaBiasReply{label, result.backend_id};
  } catch (const TransportError& e) {
    log::warn(std::string("media-bias classifier failed; headline excluded: ") + e.what());
    return MediaBiasReply{std::nullopt, ""};
  }
}

}  // namespace polbias::gateway
