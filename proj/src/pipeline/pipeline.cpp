#include "polbias/pipeline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "polbias/common/digest.hpp"
#include "polbias/common/errors.hpp"
#include "polbias/common/log.hpp"
#include "polbias/common/random.hpp"
#include "polbias/framing/entities.hpp"
#include "polbias/framing/frames.hpp"
#include "polbias/pipeline/bundle.hpp"
#include "polbias/report/report.hpp"
#include "polbias/stance/stance.hpp"
#include "polbias/style/style.hpp"

namespace polbias::pipeline {

namespace fs = std::filesystem;
using corpus::Condition;
using corpus::Headline;
using gateway::CallKind;

std::string generations_path(const std::string& m, const std::string& t) { return "generations/" + m + "/" + t + ".jsonl"; }
std::string headlines_path(const std::string& m, const std::string& t) { return "headlines/" + m + "/" + t + ".jsonl"; }
std::string embeddings_path(const std::string& m, const std::string& t) { return "embeddings/" + m + "/" + t + ".jsonl"; }
std::string stance_path(const std::string& m, const std::string& t) { return "stance/" + m + "/" + t + ".jsonl"; }

namespace {

std::string frame_labels_path(const std::string& m, const std::string& t) { return "frames/" + m + "/" + t + ".labels.jsonl"; }
std::string mentions_path(const std::string& m, const std::string& t) { return "frames/" + m + "/" + t + ".mentions.jsonl"; }
std::string frame_profile_path(const std::string& m, const std::string& t) {
  return "frames/" + m + "/" + t + ".frame_profile.jsonl";
}
std::string entity_profile_path(const std::string& m, const std::string& t) {
  return "frames/" + m + "/" + t + ".entity_profile.jsonl";
}
std::string polarity_path(const std::string& m, const std::string& t) { return "style/" + m + "/" + t + ".polarity.jsonl"; }
std::string media_bias_path(const std::string& m, const std::string& t) {
  return "style/" + m + "/" + t + ".media_bias.jsonl";
}
std::string style_profile_path(const std::string& m, const std::string& t) {
  return "style/" + m + "/" + t + ".profile.jsonl";
}

std::string jsonl(const std::vector<Json>& rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

Json single_row(const fs::path& path) {
  auto rows = read_jsonl_file(path);
  if (rows.size() != 1) throw IntegrityError(path.string() + " should hold exactly one row");
  return rows.front();
}

bool stage_runs_on_events(Stage stage) {
  return stage != Stage::kEmbed && stage != Stage::kStance;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Returns one
// exception slot per index.
std::vector<std::exception_ptr> parallel_for(std::size_t n, std::size_t workers,
                                             const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(n, std::max<std::size_t>(1, workers));
  if (threads <= 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return errors;
}

Json mention_json(const gateway::EntityMention& m) {
  return Json{{"text", m.surface}, {"type", std::string(to_string(m.type))}, {"start", m.begin}, {"end", m.end}};
}

gateway::EntityMention mention_from_json(const Json& j) {
  gateway::EntityMention m;
  m.surface = j.at("text").get<std::string>();
  m.type = entity_type_from_string(j.at("type").get<std::string>()).value_or(EntityType::kMisc);
  m.begin = j.at("start").get<std::size_t>();
  m.end = j.at("end").get<std::size_t>();
  return m;
}

}  // namespace

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {
  if (config_.mode == Mode::kReplay) {
    verify_bundle(config_.bundle);
    cache_ = std::make_shared<gateway::ArtifactCache>(config_.bundle / "envelopes", true);
  } else {
    cache_ = std::make_shared<gateway::ArtifactCache>(config_.cache_dir, false);
  }
  manifest_ = std::make_unique<RunManifest>(config_.output_dir, config_hash(config_));
}

std::shared_ptr<gateway::CallSite> Pipeline::site(const EndpointConfig& endpoint, CallKind role) {
  std::lock_guard lock(sites_mutex_);
  const std::string key = std::string(gateway::to_string(role)) + ":" + endpoint.id;
  auto it = sites_.find(key);
  if (it != sites_.end()) return it->second;
  std::shared_ptr<gateway::Backend> backend;
  if (config_.mode == Mode::kLive) backend = gateway::make_backend(endpoint, role, config_.topics);
  auto s = std::make_shared<gateway::CallSite>(endpoint, backend, cache_, config_.mode);
  if (sleeper_) s->set_retry_sleeper(sleeper_);
  sites_.emplace(key, s);
  return s;
}

std::vector<std::string> Pipeline::units(Stage stage) const {
  if (stage == Stage::kReport) return {"all"};
  std::vector<std::string> out;
  for (const auto& m : config_.models) {
    for (const auto& t : config_.topics) {
      if (!t.is_policy() && !stage_runs_on_events(stage)) continue;
      out.push_back(m.id + "/" + t.id);
    }
  }
  return out;
}

bool Pipeline::stage_complete(Stage stage) const {
  const auto list = units(stage);
  return std::all_of(list.begin(), list.end(), [&](const std::string& u) { return manifest_->unit_complete(stage, u); });
}

RunOutcome Pipeline::run_all(std::optional<Stage> stop_after) {
  return run({kAllStages.begin(), kAllStages.end()}, stop_after);
}

RunOutcome Pipeline::run(const std::vector<Stage>& targets, std::optional<Stage> stop_after) {
  std::set<Stage> wanted;
  std::vector<Stage> pending(targets.begin(), targets.end());
  while (!pending.empty()) {
    const Stage s = pending.back();
    pending.pop_back();
    if (!wanted.insert(s).second) continue;
    for (auto p : prerequisites(s)) pending.push_back(p);
  }
  RunOutcome outcome;
  for (auto s : kAllStages) {
    if (!wanted.contains(s)) continue;
    run_stage(s, outcome);
    if (stop_after && *stop_after == s) break;
  }
  std::lock_guard lock(sites_mutex_);
  for (const auto& [_, site] : sites_) outcome.backend_calls += site->backend_calls();
  if (wanted.contains(Stage::kReport)) outcome.report_dir = config_.output_dir / "report";
  return outcome;
}

void Pipeline::run_stage(Stage stage, RunOutcome& outcome) {
  const auto list = units(stage);
  const auto pre = prerequisites(stage);
  for (auto p : pre) {
    if (!stage_complete(p)) throw StageError(std::string(to_string(stage)), "prerequisite stage '" +
                                                                                 std::string(to_string(p)) +
                                                                                 "' is incomplete");
  }
  const std::string inputs = manifest_->artifacts_hash(pre);

  std::vector<std::string> todo;
  for (const auto& u : list) {
    const auto rec = manifest_->unit(stage, u);
    if (rec && rec->inputs_hash == inputs && manifest_->unit_complete(stage, u)) {
      outcome.skipped.push_back(std::string(to_string(stage)) + ":" + u);
      for (const auto& w : rec->warnings) outcome.warnings.push_back(u + ": " + w);
    } else {
      todo.push_back(u);
    }
  }
  if (!todo.empty()) log::info(std::string(to_string(stage)) + ": " + std::to_string(todo.size()) + " unit(s)");

  const std::size_t workers = stage == Stage::kReport ? 1 : config_.workers;
  std::mutex outcome_mutex;
  auto errors = parallel_for(todo.size(), workers, [&](std::size_t i) {
    const auto& name = todo[i];
    Unit unit;
    if (stage != Stage::kReport) {
      const auto slash = name.find('/');
      unit = Unit{name.substr(0, slash), name.substr(slash + 1)};
    }
    UnitRecord record;
    {
      gateway::KeyRecorder recorder;
      record = run_unit(stage, unit);
      record.cache_keys = recorder.keys();
    }
    record.inputs_hash = inputs;
    {
      std::lock_guard lock(outcome_mutex);
      outcome.executed.push_back(std::string(to_string(stage)) + ":" + name);
      for (const auto& w : record.warnings) outcome.warnings.push_back(name + ": " + w);
    }
    manifest_->record_unit(stage, name, std::move(record));
  });

  std::vector<std::string> failures;
  ExitCode code = ExitCode::kStageFailure;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const IntegrityError& e) {
      code = ExitCode::kIntegrity;
      failures.push_back(todo[i] + ": " + e.what());
    } catch (const std::exception& e) {
      failures.push_back(todo[i] + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    manifest_->set_stage_complete(stage, false);
    for (const auto& f : failures) log::error(std::string(to_string(stage)) + ": " + f);
    std::string what = failures.front();
    if (failures.size() > 1) what += " (and " + std::to_string(failures.size() - 1) + " more)";
    throw StageError(std::string(to_string(stage)), what, code);
  }
  std::sort(outcome.executed.begin(), outcome.executed.end());
  manifest_->set_stage_complete(stage, true);
}

UnitRecord Pipeline::run_unit(Stage stage, const Unit& unit) {
  switch (stage) {
    case Stage::kGenerate: return generate_unit(unit);
    case Stage::kParse: return parse_unit(unit);
    case Stage::kEmbed: return embed_unit(unit);
    case Stage::kStance: return stance_unit(unit);
    case Stage::kFrames: return frames_unit(unit);
    case Stage::kStyle: return style_unit(unit);
    case Stage::kReport: return report_unit();
  }
  throw Error("unknown stage");
}

std::string Pipeline::write_artifact(const std::string& rel, const std::string& contents, UnitRecord& record) const {
  const auto path = config_.output_dir / rel;
  fs::create_directories(path.parent_path());
  write_text_file_atomic(path, contents);
  const auto digest = sha256_hex(contents);
  record.artifacts[rel] = digest;
  return digest;
}

std::vector<Headline> Pipeline::load_headlines(const std::string& model, const std::string& topic) const {
  std::vector<Headline> out;
  for (const auto& row : read_jsonl_file(config_.output_dir / headlines_path(model, topic))) {
    out.push_back(corpus::headline_from_json(row));
  }
  return out;
}

namespace {

std::size_t target_for(const RunConfig& c, Condition cond) {
  return cond == Condition::kNeutral ? c.samples_per_topic : c.anchor_samples;
}

std::vector<Condition> conditions_for(const RunConfig& c, const corpus::TopicSpec& topic, const std::string& model) {
  std::vector<Condition> out{Condition::kNeutral};
  if (topic.is_policy() && c.writes_anchors(model)) {
    out.push_back(Condition::kPro);
    out.push_back(Condition::kOpp);
  }
  return out;
}

}  // namespace

UnitRecord Pipeline::generate_unit(const Unit& unit) {
  UnitRecord rec;
  const auto& topic = *config_.topic(unit.topic);
  gateway::GenerationClient client(site(*config_.model(unit.model), CallKind::kGenerate));
  std::vector<Json> rows;
  for (auto cond : conditions_for(config_, topic, unit.model)) {
    const std::size_t target = target_for(config_, cond);
    const std::size_t nominal = (target + config_.headlines_per_request - 1) / config_.headlines_per_request;
    const auto cap = static_cast<std::size_t>(std::ceil(static_cast<double>(nominal) * config_.request_cap_factor));
    const auto prompt = cond == Condition::kNeutral
                            ? corpus::render_task_prompt(topic)
                            : corpus::render_anchor_prompt(topic, cond == Condition::kPro ? corpus::Side::kPro
                                                                                          : corpus::Side::kOpp);
    const auto tag = corpus::separator_tag(topic, cond);
    std::size_t parsed = 0;
    std::size_t requests = 0;
    for (; requests < cap && parsed < target; ++requests) {
      corpus::SamplingParams params;
      params.temperature = config_.temperature;
      params.max_tokens = config_.max_tokens;
      params.seed = derive_seed(config_.seed, {"generate", unit.model, unit.topic, corpus::to_string(cond),
                                               std::to_string(requests)});
      const auto reply = client.generate(prompt, params);
      corpus::GenerationRecord record;
      record.model_id = unit.model;
      record.topic_id = unit.topic;
      record.condition = cond;
      record.raw_text = reply.text;
      record.request_index = static_cast<int>(requests);
      record.params = params;
      record.backend_id = reply.backend_id;
      const auto result = corpus::parse_headlines(record, tag);
      record.parse_warning = result.parse_warning;
      parsed += result.headlines.size();
      rec.backend_ids["generate:" + unit.model] = reply.backend_id;
      rows.push_back(corpus::to_json(record));
    }
    if (parsed < target) {
      rec.warnings.push_back(std::string(corpus::to_string(cond)) + ": shortfall, " + std::to_string(parsed) + " of " +
                             std::to_string(target) + " headlines after " + std::to_string(requests) + " requests");
    }
  }
  write_artifact(generations_path(unit.model, unit.topic), jsonl(rows), rec);
  return rec;
}

UnitRecord Pipeline::parse_unit(const Unit& unit) {
  UnitRecord rec;
  const auto& topic = *config_.topic(unit.topic);
  std::map<Condition, std::vector<Headline>> by_condition;
  std::size_t empty_replies = 0;
  for (const auto& row : read_jsonl_file(config_.output_dir / generations_path(unit.model, unit.topic))) {
    const auto record = corpus::generation_from_json(row);
    auto parsed = corpus::parse_headlines(record, corpus::separator_tag(topic, record.condition));
    if (parsed.parse_warning) ++empty_replies;
    auto& bucket = by_condition[record.condition];
    for (auto& h : parsed.headlines) bucket.push_back(std::move(h));
  }
  std::vector<Json> rows;
  for (auto cond : conditions_for(config_, topic, unit.model)) {
    auto& bucket = by_condition[cond];
    const std::size_t target = target_for(config_, cond);
    if (bucket.size() > target) bucket.resize(target);
    if (bucket.size() < target) {
      rec.warnings.push_back(std::string(corpus::to_string(cond)) + ": " + std::to_string(bucket.size()) + " of " +
                             std::to_string(target) + " headlines");
    }
    for (const auto& h : bucket) rows.push_back(corpus::to_json(h));
  }
  if (empty_replies > 0) rec.warnings.push_back(std::to_string(empty_replies) + " generation(s) yielded no headline");
  write_artifact(headlines_path(unit.model, unit.topic), jsonl(rows), rec);
  return rec;
}

UnitRecord Pipeline::embed_unit(const Unit& unit) {
  UnitRecord rec;
  const auto headlines = load_headlines(unit.model, unit.topic);
  std::vector<std::string> texts;
  texts.reserve(headlines.size());
  for (const auto& h : headlines) texts.push_back(h.text);
  gateway::Embedder embedder(site(config_.embedding, CallKind::kEmbed));
  const auto batch = embedder.embed(texts);
  std::vector<Json> rows;
  for (std::size_t i = 0; i < headlines.size(); ++i) {
    rows.push_back(Json{{"condition", std::string(corpus::to_string(headlines[i].source.condition))},
                        {"request_index", headlines[i].source.request_index},
                        {"position", headlines[i].position},
                        {"vector", batch.vectors[i].values}});
  }
  if (!batch.backend_id.empty()) rec.backend_ids["embedding"] = batch.backend_id;
  write_artifact(embeddings_path(unit.model, unit.topic), jsonl(rows), rec);
  return rec;
}

UnitRecord Pipeline::stance_unit(const Unit& unit) {
  UnitRecord rec;
  auto load = [&](const std::string& model, Condition cond) {
    std::vector<gateway::EmbeddingVector> out;
    for (const auto& row : read_jsonl_file(config_.output_dir / embeddings_path(model, unit.topic))) {
      if (corpus::parse_condition(row.at("condition").get<std::string>()) != cond) continue;
      gateway::EmbeddingVector v;
      v.values = row.at("vector").get<std::vector<double>>();
      v.normalized = true;
      out.push_back(std::move(v));
    }
    return out;
  };
  const auto samples = load(unit.model, Condition::kNeutral);
  const auto anchor_model = config_.anchor_model_for(unit.model);
  stance::AnchorSet pro(corpus::Side::kPro, load(anchor_model, Condition::kPro));
  stance::AnchorSet opp(corpus::Side::kOpp, load(anchor_model, Condition::kOpp));
  stance::StanceConfig sc;
  sc.resamples = config_.resamples;
  sc.alpha = config_.alpha;
  sc.seed = stance::cell_seed(config_.seed, unit.model, unit.topic);
  const auto result = stance::estimate_stance(samples, pro, opp, sc, unit.model, unit.topic);
  auto row = stance::to_json(result);
  row["anchor_model"] = anchor_model;
  write_artifact(stance_path(unit.model, unit.topic), jsonl({row}), rec);
  return rec;
}

UnitRecord Pipeline::frames_unit(const Unit& unit) {
  UnitRecord rec;
  const auto& topic = *config_.topic(unit.topic);
  std::vector<Headline> headlines;
  for (auto& h : load_headlines(unit.model, unit.topic)) {
    if (h.source.condition == Condition::kNeutral) headlines.push_back(std::move(h));
  }

  gateway::FrameClassifier classifier(site(config_.frame_classifier, CallKind::kClassifyFrames));
  const auto assignments = classifier.classify_frames(headlines, topic);
  std::vector<FrameSet> frame_sets;
  std::vector<Json> label_rows;
  std::size_t frame_warnings = 0;
  for (std::size_t i = 0; i < headlines.size(); ++i) {
    frame_sets.push_back(assignments[i].frames);
    std::vector<std::string> names;
    for (auto f : assignments[i].frames.frames()) names.emplace_back(frame_name(f));
    frame_warnings += assignments[i].parse_warning ? 1 : 0;
    label_rows.push_back(Json{{"request_index", headlines[i].source.request_index},
                              {"position", headlines[i].position},
                              {"frames", names},
                              {"parse_warning", assignments[i].parse_warning}});
  }
  if (!classifier.backend_id().empty()) rec.backend_ids["frame_classifier"] = classifier.backend_id();
  if (frame_warnings > 0) {
    rec.warnings.push_back(std::to_string(frame_warnings) + " headline(s) defaulted to Other after unparseable frame replies");
  }

  gateway::EntityTagger tagger(site(config_.ner, CallKind::kExtractEntities));
  std::vector<std::vector<gateway::EntityMention>> mentions;
  std::vector<Json> mention_rows;
  std::size_t ner_warnings = 0;
  for (const auto& h : headlines) {
    auto ex = tagger.extract_entities(h);
    if (!ex.backend_id.empty()) rec.backend_ids["ner"] = ex.backend_id;
    ner_warnings += ex.warning ? 1 : 0;
    Json list = Json::array();
    for (const auto& m : ex.mentions) list.push_back(mention_json(m));
    mention_rows.push_back(Json{{"request_index", h.source.request_index},
                                {"position", h.position},
                                {"mentions", list},
                                {"warning", ex.warning}});
    mentions.push_back(std::move(ex.mentions));
  }
  if (ner_warnings > 0) rec.warnings.push_back(std::to_string(ner_warnings) + " headline(s) with entity extraction warnings");

  const auto frame_profile = framing::build_frame_profile(frame_sets, unit.model, unit.topic);
  const auto entity_profile = framing::build_entity_profile(mentions, config_.aliases, unit.model, unit.topic);
  write_artifact(frame_labels_path(unit.model, unit.topic), jsonl(label_rows), rec);
  write_artifact(mentions_path(unit.model, unit.topic), jsonl(mention_rows), rec);
  write_artifact(frame_profile_path(unit.model, unit.topic), jsonl({framing::to_json(frame_profile)}), rec);
  write_artifact(entity_profile_path(unit.model, unit.topic), jsonl({framing::to_json(entity_profile)}), rec);
  return rec;
}

UnitRecord Pipeline::style_unit(const Unit& unit) {
  UnitRecord rec;
  std::vector<framing::EntityProfile> profiles;
  for (const auto& m : config_.models) {
    profiles.push_back(
        framing::entity_profile_from_json(single_row(config_.output_dir / entity_profile_path(m.id, unit.topic))));
  }
  // Display form per key: the first model (in configured order) that has it.
  std::map<std::string, std::string> display;
  for (const auto& key : framing::top_k_union(profiles, config_.k)) {
    for (const auto& p : profiles) {
      if (const auto* e = p.find(key)) {
        display[key] = e->canonical;
        break;
      }
    }
  }

  std::vector<Headline> headlines;
  for (auto& h : load_headlines(unit.model, unit.topic)) {
    if (h.source.condition == Condition::kNeutral) headlines.push_back(std::move(h));
  }
  const auto mention_rows = read_jsonl_file(config_.output_dir / mentions_path(unit.model, unit.topic));
  if (mention_rows.size() != headlines.size()) throw IntegrityError("mention rows do not match headlines for " + unit.model + "/" + unit.topic);

  gateway::SentimentClassifier sentiment(site(config_.sentiment, CallKind::kTargetSentiment));
  gateway::MediaBiasClassifier bias(site(config_.media_bias, CallKind::kMediaBias));
  std::vector<style::PolarityRecord> records;
  std::vector<std::optional<MediaBiasLabel>> labels;
  std::vector<Json> polarity_rows, bias_rows;
  for (std::size_t i = 0; i < headlines.size(); ++i) {
    const auto& h = headlines[i];
    const auto& row = mention_rows[i];
    if (row.at("request_index").get<int>() != h.source.request_index || row.at("position").get<int>() != h.position) {
      throw IntegrityError("mention rows out of order for " + unit.model + "/" + unit.topic);
    }
    std::vector<gateway::EntityMention> mentions;
    for (const auto& m : row.at("mentions")) mentions.push_back(mention_from_json(m));
    for (const auto& c : framing::canonicalize_entities(mentions, config_.aliases)) {
      auto it = display.find(c.key);
      if (it == display.end()) continue;
      // Find the raw surface that produced this canonical mention.
      const gateway::EntityMention* source = nullptr;
      for (const auto& m : mentions) {
        if (framing::canonicalize(m, config_.aliases).surface == c.surface) {
          source = &m;
          break;
        }
      }
      try {
        const auto reply = sentiment.target_sentiment(h, source ? source->surface : c.surface);
        if (!reply.backend_id.empty()) rec.backend_ids["sentiment"] = reply.backend_id;
        style::PolarityRecord r;
        r.model_id = unit.model;
        r.topic_id = unit.topic;
        r.request_index = static_cast<std::size_t>(h.source.request_index);
        r.position = static_cast<std::size_t>(h.position);
        r.entity = it->second;
        r.surface = source ? source->surface : c.surface;
        r.polarity = reply.polarity;
        polarity_rows.push_back(style::to_json(r));
        records.push_back(std::move(r));
      } catch (const PreconditionError& e) {
        rec.warnings.push_back(std::string("sentiment skipped: ") + e.what());
      }
    }
    const auto reply = bias.classify_media_bias(h);
    if (!reply.backend_id.empty()) rec.backend_ids["media_bias"] = reply.backend_id;
    labels.push_back(reply.label);
    bias_rows.push_back(Json{{"request_index", h.source.request_index},
                             {"position", h.position},
                             {"label", reply.label ? Json(std::string(to_string(*reply.label))) : Json(nullptr)}});
  }
  const auto profile = style::build_style_profile(unit.model, unit.topic, records, labels);
  if (profile.media_bias_excluded > 0) {
    rec.warnings.push_back(std::to_string(profile.media_bias_excluded) + " headline(s) excluded from the media-bias rate");
  }
  write_artifact(polarity_path(unit.model, unit.topic), jsonl(polarity_rows), rec);
  write_artifact(media_bias_path(unit.model, unit.topic), jsonl(bias_rows), rec);
  write_artifact(style_profile_path(unit.model, unit.topic), jsonl({style::to_json(profile)}), rec);
  return rec;
}

UnitRecord Pipeline::report_unit() {
  UnitRecord rec;
  report::ReportInputs in;
  in.topics = config_.topics;
  for (const auto& m : config_.models) in.models.push_back(m.id);
  in.k = config_.k;
  for (const auto& m : config_.models) {
    for (const auto& t : config_.topics) {
      const auto root = config_.output_dir;
      if (t.is_policy() && fs::exists(root / stance_path(m.id, t.id))) {
        in.stance.push_back(stance::stance_from_json(single_row(root / stance_path(m.id, t.id))));
      }
      if (fs::exists(root / frame_profile_path(m.id, t.id))) {
        in.frames.push_back(framing::frame_profile_from_json(single_row(root / frame_profile_path(m.id, t.id))));
      }
      if (fs::exists(root / entity_profile_path(m.id, t.id))) {
        in.entities.push_back(framing::entity_profile_from_json(single_row(root / entity_profile_path(m.id, t.id))));
      }
      if (fs::exists(root / style_profile_path(m.id, t.id))) {
        in.style.push_back(style::style_profile_from_json(single_row(root / style_profile_path(m.id, t.id))));
      }
    }
  }
  in.provenance.backend_ids = manifest_->backend_ids();
  in.provenance.backend_ids["anchor_source"] = config_.anchor_source;
  in.provenance.root_seed = config_.seed;
  in.provenance.resamples = config_.resamples;
  in.provenance.manifest_hash = manifest_->data_hash();

  const auto dir = config_.output_dir / "report";
  const auto outcome = report::write_report(in, dir);
  for (const auto& rel : outcome.files) {
    rec.artifacts[(fs::path("report") / rel).generic_string()] = file_sha256_hex(dir / rel);
  }
  rec.warnings = outcome.warnings;
  return rec;
}

}  // namespace polbias::pipeline
