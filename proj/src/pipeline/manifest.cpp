#include "polbias/pipeline/manifest.hpp"

#include "polbias/common/digest.hpp"
#include "polbias/common/errors.hpp"
#include "polbias/common/log.hpp"
#include "polbias/gateway/cache.hpp"

namespace polbias::pipeline {

namespace fs = std::filesystem;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kGenerate: return "generate";
    case Stage::kParse: return "parse";
    case Stage::kEmbed: return "embed";
    case Stage::kStance: return "stance";
    case Stage::kFrames: return "frames";
    case Stage::kStyle: return "style";
    case Stage::kReport: return "report";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (auto s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

std::vector<Stage> prerequisites(Stage stage) {
  switch (stage) {
    case Stage::kGenerate: return {};
    case Stage::kParse: return {Stage::kGenerate};
    case Stage::kEmbed: return {Stage::kParse};
    case Stage::kStance: return {Stage::kEmbed};
    case Stage::kFrames: return {Stage::kParse};
    case Stage::kStyle: return {Stage::kFrames};
    case Stage::kReport: return {Stage::kStance, Stage::kFrames, Stage::kStyle};
  }
  return {};
}

Json to_json(const UnitRecord& r) {
  return Json{{"artifacts", r.artifacts},
              {"cache_keys", r.cache_keys},
              {"backend_ids", r.backend_ids},
              {"warnings", r.warnings},
              {"inputs_hash", r.inputs_hash},
              {"completed_at", r.completed_at}};
}

UnitRecord unit_record_from_json(const Json& j) {
  UnitRecord r;
  r.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
  r.cache_keys = j.at("cache_keys").get<std::set<std::string>>();
  r.backend_ids = j.value("backend_ids", std::map<std::string, std::string>{});
  r.warnings = j.value("warnings", std::vector<std::string>{});
  r.inputs_hash = j.value("inputs_hash", std::string{});
  r.completed_at = j.value("completed_at", std::string{});
  return r;
}

RunManifest::RunManifest(fs::path output_dir, std::string config_hash)
    : output_dir_(std::move(output_dir)), config_hash_(std::move(config_hash)), created_at_(gateway::utc_timestamp()) {
  if (!fs::exists(path())) return;
  Json j;
  try {
    j = read_json_file(path());
  } catch (const std::exception& e) {
    log::warn("ignoring unreadable manifest " + path().string() + ": " + e.what());
    return;
  }
  if (j.value("config_hash", std::string{}) != config_hash_) {
    log::warn("manifest in " + output_dir_.string() + " belongs to a different config; starting fresh");
    return;
  }
  created_at_ = j.value("created_at", created_at_);
  for (const auto& [name, stage] : j.at("stages").items()) {
    const Stage s = parse_stage(name);
    stage_state_[s] = {stage.value("complete", false), stage.value("completed_at", std::string{})};
    for (const auto& [unit, rec] : stage.at("units").items()) units_[s][unit] = unit_record_from_json(rec);
  }
}

bool RunManifest::verify(const UnitRecord& record) const {
  for (const auto& [rel, digest] : record.artifacts) {
    const auto p = output_dir_ / rel;
    if (!fs::exists(p) || file_sha256_hex(p) != digest) return false;
  }
  return true;
}

bool RunManifest::unit_complete(Stage stage, const std::string& unit) const {
  std::lock_guard lock(mutex_);
  auto s = units_.find(stage);
  if (s == units_.end()) return false;
  auto u = s->second.find(unit);
  return u != s->second.end() && verify(u->second);
}

std::optional<UnitRecord> RunManifest::unit(Stage stage, const std::string& unit) const {
  std::lock_guard lock(mutex_);
  auto s = units_.find(stage);
  if (s == units_.end()) return std::nullopt;
  auto u = s->second.find(unit);
  if (u == s->second.end()) return std::nullopt;
  return u->second;
}

void RunManifest::record_unit(Stage stage, const std::string& unit, UnitRecord record) {
  std::lock_guard lock(mutex_);
  if (record.completed_at.empty()) record.completed_at = gateway::utc_timestamp();
  units_[stage][unit] = std::move(record);
  save_locked();
}

void RunManifest::set_stage_complete(Stage stage, bool complete) {
  std::lock_guard lock(mutex_);
  stage_state_[stage] = {complete, complete ? gateway::utc_timestamp() : std::string{}};
  save_locked();
}

bool RunManifest::stage_marked_complete(Stage stage) const {
  std::lock_guard lock(mutex_);
  auto it = stage_state_.find(stage);
  return it != stage_state_.end() && it->second.first;
}

std::set<std::string> RunManifest::cache_keys(std::span<const Stage> stages) const {
  std::lock_guard lock(mutex_);
  std::set<std::string> keys;
  for (auto s : stages) {
    auto it = units_.find(s);
    if (it == units_.end()) continue;
    for (const auto& [_, rec] : it->second) keys.insert(rec.cache_keys.begin(), rec.cache_keys.end());
  }
  return keys;
}

std::map<std::string, std::string> RunManifest::backend_ids() const {
  std::lock_guard lock(mutex_);
  std::map<std::string, std::string> out;
  for (const auto& [_, units] : units_) {
    for (const auto& [__, rec] : units) {
      for (const auto& [role, id] : rec.backend_ids) out.emplace(role, id);
    }
  }
  return out;
}

std::string RunManifest::artifacts_hash(std::span<const Stage> stages) const {
  std::lock_guard lock(mutex_);
  std::string material;
  for (auto s : stages) {
    material += std::string(to_string(s)) + "\n";
    auto it = units_.find(s);
    if (it == units_.end()) continue;
    for (const auto& [unit, rec] : it->second) {
      for (const auto& [rel, digest] : rec.artifacts) material += rel + " " + digest + "\n";
    }
  }
  return sha256_hex(material);
}

std::string RunManifest::data_hash() const {
  std::lock_guard lock(mutex_);
  std::map<std::string, std::string> all;
  for (const auto& [stage, units] : units_) {
    if (stage == Stage::kReport) continue;
    for (const auto& [_, rec] : units) all.insert(rec.artifacts.begin(), rec.artifacts.end());
  }
  std::string material = config_hash_ + "\n";
  for (const auto& [rel, digest] : all) material += rel + " " + digest + "\n";
  return sha256_hex(material);
}

Json RunManifest::to_json() const {
  Json stages = Json::object();
  for (auto s : kAllStages) {
    auto su = units_.find(s);
    auto ss = stage_state_.find(s);
    if (su == units_.end() && ss == stage_state_.end()) continue;
    Json units = Json::object();
    if (su != units_.end()) {
      for (const auto& [unit, rec] : su->second) units[unit] = pipeline::to_json(rec);
    }
    const bool complete = ss != stage_state_.end() && ss->second.first;
    stages[std::string(to_string(s))] =
        Json{{"complete", complete}, {"completed_at", ss != stage_state_.end() ? ss->second.second : ""}, {"units", units}};
  }
  return Json{{"config_hash", config_hash_}, {"created_at", created_at_}, {"stages", stages}};
}

void RunManifest::save_locked() const {
  fs::create_directories(output_dir_);
  write_json_file(path(), to_json());
}

void RunManifest::save() const {
  std::lock_guard lock(mutex_);
  save_locked();
}

}  // namespace polbias::pipeline
