#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polbias/corpus/headline.hpp"
#include "polbias/gateway/cache.hpp"
#include "polbias/gateway/gateway.hpp"
#include "polbias/pipeline/config.hpp"
#include "polbias/pipeline/manifest.hpp"

namespace polbias::pipeline {

struct RunOutcome {
  std::vector<std::string> executed;  // "<stage>:<unit>"
  std::vector<std::string> skipped;
  std::vector<std::string> warnings;
  std::uint64_t backend_calls = 0;
  std::filesystem::path report_dir;
};

// Drives generate -> parse -> embed -> stance -> frames -> style -> report
// over (model, topic) work units. Units already recorded in the manifest
// with intact artifacts are skipped.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  // Runs `targets` plus their prerequisites in dependency order. With
  // stop_after set, returns once that stage is done.
  RunOutcome run(const std::vector<Stage>& targets, std::optional<Stage> stop_after = std::nullopt);
  RunOutcome run_all(std::optional<Stage> stop_after = std::nullopt);

  const RunConfig& config() const { return config_; }
  RunManifest& manifest() { return *manifest_; }
  const std::shared_ptr<gateway::ArtifactCache>& cache() const { return cache_; }

  // Units of a stage, as "<model>/<topic>" (or "all" for the report).
  std::vector<std::string> units(Stage stage) const;
  bool stage_complete(Stage stage) const;

  // Overrides the retry sleep of every call site created afterwards (tests).
  void set_retry_sleeper(gateway::RetryPolicy::Sleeper sleeper) { sleeper_ = std::move(sleeper); }

 private:
  struct Unit {
    std::string model;
    std::string topic;
  };

  void run_stage(Stage stage, RunOutcome& outcome);
  UnitRecord run_unit(Stage stage, const Unit& unit);
  UnitRecord generate_unit(const Unit& unit);
  UnitRecord parse_unit(const Unit& unit);
  UnitRecord embed_unit(const Unit& unit);
  UnitRecord stance_unit(const Unit& unit);
  UnitRecord frames_unit(const Unit& unit);
  UnitRecord style_unit(const Unit& unit);
  UnitRecord report_unit();

  std::shared_ptr<gateway::CallSite> site(const EndpointConfig& endpoint, gateway::CallKind role);
  std::vector<corpus::Headline> load_headlines(const std::string& model, const std::string& topic) const;
  std::string write_artifact(const std::string& rel, const std::string& contents, UnitRecord& record) const;

  RunConfig config_;
  std::shared_ptr<gateway::ArtifactCache> cache_;
  std::unique_ptr<RunManifest> manifest_;
  std::mutex sites_mutex_;
  std::map<std::string, std::shared_ptr<gateway::CallSite>> sites_;
  gateway::RetryPolicy::Sleeper sleeper_;
};

// Relative artifact paths.
std::string generations_path(const std::string& model, const std::string& topic);
std::string headlines_path(const std::string& model, const std::string& topic);
std::string embeddings_path(const std::string& model, const std::string& topic);
std::string stance_path(const std::string& model, const std::string& topic);

}  // namespace polbias::pipeline
