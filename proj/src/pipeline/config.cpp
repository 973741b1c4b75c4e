#include "polbias/pipeline/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <set>

#include "polbias/common/digest.hpp"
#include "polbias/common/errors.hpp"
#include "polbias/gateway/transport.hpp"
#include "polbias/pipeline/bundle.hpp"

namespace polbias::pipeline {
namespace {

const std::regex kIdPattern("[A-Za-z0-9._-]+");

void check_id(const std::string& id, const std::string& what) {
  if (!std::regex_match(id, kIdPattern) || id == "." || id == "..") {
    throw ConfigError(what + " id '" + id + "' must match [A-Za-z0-9._-]+");
  }
}

std::vector<std::string> split_filter(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto part = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

template <typename T>
T read_field(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

EndpointConfig read_endpoint(const Json& doc, const char* role) {
  if (!doc.contains(role)) throw ConfigError(std::string("config lacks the '") + role + "' endpoint");
  return gateway::endpoint_from_json(doc.at(role), role);
}

}  // namespace

const EndpointConfig* RunConfig::model(const std::string& id) const {
  for (const auto& m : models) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

const corpus::TopicSpec* RunConfig::topic(const std::string& id) const {
  for (const auto& t : topics) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::string RunConfig::anchor_model_for(const std::string& model_id) const {
  return anchor_source == "self" ? model_id : anchor_source;
}

bool RunConfig::writes_anchors(const std::string& model_id) const {
  return anchor_source == "self" || anchor_source == model_id;
}

RunConfig load_run_config(const Json& doc, const Overrides& ov) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  RunConfig c;
  c.topics = corpus::load_topics(doc);
  for (const auto& t : c.topics) check_id(t.id, "topic");

  if (!doc.contains("models") || !doc.at("models").is_array() || doc.at("models").empty()) {
    throw ConfigError("config needs a non-empty 'models' list");
  }
  std::set<std::string> seen;
  for (const auto& m : doc.at("models")) {
    auto e = gateway::endpoint_from_json(m);
    check_id(e.id, "model");
    if (!seen.insert(e.id).second) throw ConfigError("duplicate model id '" + e.id + "'");
    c.models.push_back(std::move(e));
  }
  c.embedding = read_endpoint(doc, "embedding");
  c.frame_classifier = read_endpoint(doc, "frame_classifier");
  c.ner = read_endpoint(doc, "ner");
  c.sentiment = read_endpoint(doc, "sentiment");
  c.media_bias = read_endpoint(doc, "media_bias");

  c.samples_per_topic = read_field<std::size_t>(doc, "samples_per_topic", c.samples_per_topic);
  c.headlines_per_request = read_field<std::size_t>(doc, "headlines_per_request", c.headlines_per_request);
  c.request_cap_factor = read_field<double>(doc, "request_cap_factor", c.request_cap_factor);
  c.anchor_samples = read_field<std::size_t>(doc, "anchor_samples", c.samples_per_topic);
  c.anchor_source = read_field<std::string>(doc, "anchor_source", c.anchor_source);
  c.seed = read_field<std::uint64_t>(doc, "seed", c.seed);
  c.resamples = read_field<int>(doc, "resamples", c.resamples);
  c.alpha = read_field<double>(doc, "alpha", c.alpha);
  c.k = read_field<std::size_t>(doc, "k", c.k);
  if (doc.contains("sampling")) {
    const auto& s = doc.at("sampling");
    c.temperature = read_field<double>(s, "temperature", c.temperature);
    c.max_tokens = read_field<int>(s, "max_tokens", c.max_tokens);
  }
  if (doc.contains("entity_aliases")) c.aliases = framing::AliasTable::from_json(doc.at("entity_aliases"));
  c.mode = gateway::parse_mode(read_field<std::string>(doc, "mode", "live"));
  c.bundle = read_field<std::string>(doc, "bundle", "");
  c.output_dir = read_field<std::string>(doc, "output_dir", c.output_dir.string());
  c.cache_dir = read_field<std::string>(doc, "cache_dir", "");
  c.workers = read_field<std::size_t>(doc, "workers", c.workers);

  if (ov.mode) c.mode = *ov.mode;
  if (ov.bundle) c.bundle = *ov.bundle;
  if (ov.seed) c.seed = *ov.seed;
  if (ov.output_dir) c.output_dir = *ov.output_dir;
  if (c.cache_dir.empty()) c.cache_dir = c.output_dir / "cache";

  const auto model_filter = split_filter(ov.models);
  if (!model_filter.empty()) {
    std::vector<EndpointConfig> kept;
    for (const auto& id : model_filter) {
      const auto* m = c.model(id);
      if (!m) throw ConfigError("--models names unknown model '" + id + "'");
      kept.push_back(*m);
    }
    c.models = std::move(kept);
  }
  const auto topic_filter = split_filter(ov.topics);
  if (!topic_filter.empty()) {
    std::vector<corpus::TopicSpec> kept;
    for (const auto& id : topic_filter) {
      const auto* t = c.topic(id);
      if (!t) throw ConfigError("--topics names unknown topic '" + id + "'");
      kept.push_back(*t);
    }
    c.topics = std::move(kept);
  }

  if (c.samples_per_topic < 10) throw ConfigError("samples_per_topic must be >= 10");
  if (c.anchor_samples < 2) throw ConfigError("anchor_samples must be >= 2");
  if (c.headlines_per_request < 1) throw ConfigError("headlines_per_request must be >= 1");
  if (!(c.request_cap_factor >= 1.0)) throw ConfigError("request_cap_factor must be >= 1");
  if (c.resamples < 1000) throw ConfigError("resamples must be >= 1000");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.anchor_source != "self" && !c.model(c.anchor_source)) {
    throw ConfigError("anchor_source '" + c.anchor_source + "' is neither 'self' nor a configured model");
  }
  if (c.mode == Mode::kReplay && c.bundle.empty()) throw ConfigError("replay mode requires a bundle path");
  return c;
}

RunConfig load_run_config_file(const std::filesystem::path& path, const Overrides& overrides) {
  Json doc;
  try {
    doc = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return load_run_config(doc, overrides);
}

Json analysis_json(const RunConfig& c) {
  Json topics = Json::array();
  for (const auto& t : c.topics) topics.push_back(corpus::to_json(t));
  Json models = Json::array();
  for (const auto& m : c.models) models.push_back(gateway::to_json(m));
  return Json{{"topics", topics},
              {"models", models},
              {"embedding", gateway::to_json(c.embedding)},
              {"frame_classifier", gateway::to_json(c.frame_classifier)},
              {"ner", gateway::to_json(c.ner)},
              {"sentiment", gateway::to_json(c.sentiment)},
              {"media_bias", gateway::to_json(c.media_bias)},
              {"samples_per_topic", c.samples_per_topic},
              {"headlines_per_request", c.headlines_per_request},
              {"request_cap_factor", c.request_cap_factor},
              {"anchor_samples", c.anchor_samples},
              {"anchor_source", c.anchor_source},
              {"seed", c.seed},
              {"resamples", c.resamples},
              {"alpha", c.alpha},
              {"k", c.k},
              {"sampling", {{"temperature", c.temperature}, {"max_tokens", c.max_tokens}}},
              {"entity_aliases", c.aliases.to_json()}};
}

std::string config_hash(const RunConfig& config) { return sha256_hex(analysis_json(config).dump()); }

std::string format_diagnostic(const Diagnostic& d) {
  return std::string(d.level == Diagnostic::Level::kError ? "error" : "warning") + ": " + d.subject + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.level == Diagnostic::Level::kError; });
}

std::vector<Diagnostic> validate(const Json& doc, const Overrides& overrides, bool probe_network) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string subject, std::string message) {
    out.push_back({Diagnostic::Level::kError, std::move(subject), std::move(message)});
  };

  if (!doc.is_object()) {
    error("config", "document must be a JSON object");
    return out;
  }
  // Topics are checked one by one so every broken entry is reported.
  if (doc.contains("topics") && doc.at("topics").is_array()) {
    for (const auto& t : doc.at("topics")) {
      try {
        corpus::load_topics(Json{{"topics", Json::array({t})}});
      } catch (const Error& e) {
        error("topic " + t.value("id", std::string("?")), e.what());
      }
    }
  }
  for (const char* role : {"embedding", "frame_classifier", "ner", "sentiment", "media_bias"}) {
    if (!doc.contains(role)) error(role, "endpoint missing");
  }

  RunConfig config;
  try {
    config = load_run_config(doc, overrides);
  } catch (const Error& e) {
    if (out.empty()) error("config", e.what());
    return out;
  }

  std::vector<const EndpointConfig*> endpoints;
  for (const auto& m : config.models) endpoints.push_back(&m);
  for (const auto* e : {&config.embedding, &config.frame_classifier, &config.ner, &config.sentiment,
                        &config.media_bias}) {
    endpoints.push_back(e);
  }

  if (config.mode == Mode::kLive) {
    for (const auto* e : endpoints) {
      if (e->backend != "http") continue;
      if (!e->auth_token_env.empty() && !std::getenv(e->auth_token_env.c_str())) {
        error("endpoint " + e->id, "auth variable " + e->auth_token_env + " is not set");
      }
      if (probe_network) {
        if (auto problem = gateway::probe_endpoint(*e)) error("endpoint " + e->id, *problem);
      }
    }
  } else {
    for (const auto& problem : bundle_problems(config.bundle)) error("bundle " + config.bundle.string(), problem);
  }
  return out;
}

}  // namespace polbias::pipeline
