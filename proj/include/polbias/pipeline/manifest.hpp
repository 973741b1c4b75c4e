#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polbias/common/json_io.hpp"

namespace polbias::pipeline {

enum class Stage { kGenerate, kParse, kEmbed, kStance, kFrames, kStyle, kReport };

inline constexpr std::array<Stage, 7> kAllStages{Stage::kGenerate, Stage::kParse, Stage::kEmbed, Stage::kStance,
                                                 Stage::kFrames,   Stage::kStyle, Stage::kReport};

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);
// Stages whose outputs `stage` reads.
std::vector<Stage> prerequisites(Stage stage);

// What one completed work unit produced.
struct UnitRecord {
  std::map<std::string, std::string> artifacts;  // path relative to output_dir -> sha256
  std::set<std::string> cache_keys;
  std::map<std::string, std::string> backend_ids;  // role -> backend id
  std::vector<std::string> warnings;
  std::string inputs_hash;  // digest of the upstream artifacts the unit read
  std::string completed_at;
};

// manifest.json in the output directory. A unit counts as done only while
// every artifact it declared still exists with the recorded digest. A
// manifest written under a different config hash is discarded.
class RunManifest {
 public:
  RunManifest(std::filesystem::path output_dir, std::string config_hash);

  const std::string& config_hash() const { return config_hash_; }
  bool unit_complete(Stage stage, const std::string& unit) const;
  std::optional<UnitRecord> unit(Stage stage, const std::string& unit) const;
  void record_unit(Stage stage, const std::string& unit, UnitRecord record);
  void set_stage_complete(Stage stage, bool complete);
  bool stage_marked_complete(Stage stage) const;

  std::set<std::string> cache_keys(std::span<const Stage> stages) const;
  std::map<std::string, std::string> backend_ids() const;

  // Digest over the artifact digests of every unit of the given stages.
  std::string artifacts_hash(std::span<const Stage> stages) const;

  // Digest over the config hash and every non-report artifact digest.
  // Timestamps are not part of it.
  std::string data_hash() const;

  Json to_json() const;
  void save() const;
  std::filesystem::path path() const { return output_dir_ / "manifest.json"; }

 private:
  bool verify(const UnitRecord& record) const;
  void save_locked() const;

  std::filesystem::path output_dir_;
  std::string config_hash_;
  std::string created_at_;
  mutable std::mutex mutex_;
  std::map<Stage, std::map<std::string, UnitRecord>> units_;
  std::map<Stage, std::pair<bool, std::string>> stage_state_;  // complete flag, timestamp
};

Json to_json(const UnitRecord& r);
UnitRecord unit_record_from_json(const Json& j);

}  // namespace polbias::pipeline
