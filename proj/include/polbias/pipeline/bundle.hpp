#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"

namespace polbias::pipeline {

struct RunConfig;
struct RunOutcome;

// Replay bundle layout:
//   bundle.json             {format, config, config_hash, files: {relpath: sha256}}
//   envelopes/<xx>/<hex>.json  cache envelopes, same layout as the cache
struct BundleInfo {
  Json config;  // analysis config of the recorded run
  std::string config_hash;
  std::map<std::string, std::string> files;
};

inline constexpr const char* kBundleFormat = "polbias-bundle/1";

BundleInfo read_bundle_info(const std::filesystem::path& bundle);

// Missing, unreadable or tampered entries; empty for a complete bundle.
std::vector<std::string> bundle_problems(const std::filesystem::path& bundle);

// Throws IntegrityError listing every problem.
void verify_bundle(const std::filesystem::path& bundle);

// Copies every envelope the run's generation and classifier stages used.
// Throws PreconditionError naming incomplete stages.
BundleInfo export_bundle(const RunConfig& config, const std::filesystem::path& bundle);

// Verifies the bundle, then runs every stage from it into out_dir without a backend.
RunOutcome replay(const std::filesystem::path& bundle, const std::filesystem::path& out_dir, std::size_t workers = 1);

}  // namespace polbias::pipeline
