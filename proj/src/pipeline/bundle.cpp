#include "polbias/pipeline/bundle.hpp"

#include "polbias/common/digest.hpp"
#include "polbias/common/errors.hpp"
#include "polbias/common/log.hpp"
#include "polbias/pipeline/pipeline.hpp"

namespace polbias::pipeline {

namespace fs = std::filesystem;

namespace {

std::string envelope_rel(const std::string& hex) { return "envelopes/" + hex.substr(0, 2) + "/" + hex + ".json"; }

}  // namespace

BundleInfo read_bundle_info(const fs::path& bundle) {
  const auto path = bundle / "bundle.json";
  if (!fs::exists(path)) throw IntegrityError("bundle " + bundle.string() + " has no bundle.json");
  Json j;
  try {
    j = read_json_file(path);
  } catch (const std::exception& e) {
    throw IntegrityError("bundle.json unreadable: " + std::string(e.what()));
  }
  if (j.value("format", std::string{}) != kBundleFormat) throw IntegrityError("unsupported bundle format");
  BundleInfo info;
  info.config = j.at("config");
  info.config_hash = j.at("config_hash").get<std::string>();
  info.files = j.at("files").get<std::map<std::string, std::string>>();
  return info;
}

std::vector<std::string> bundle_problems(const fs::path& bundle) {
  std::vector<std::string> problems;
  BundleInfo info;
  try {
    info = read_bundle_info(bundle);
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
    return problems;
  }
  if (sha256_hex(info.config.dump()) != info.config_hash) problems.emplace_back("embedded config does not match its hash");
  for (const auto& [rel, digest] : info.files) {
    const auto p = bundle / rel;
    if (!fs::exists(p)) {
      problems.push_back("missing " + rel);
    } else if (file_sha256_hex(p) != digest) {
      problems.push_back("digest mismatch for " + rel);
    }
  }
  return problems;
}

void verify_bundle(const fs::path& bundle) {
  const auto problems = bundle_problems(bundle);
  if (problems.empty()) return;
  std::string what = "replay bundle " + bundle.string() + " failed verification:";
  for (const auto& p : problems) what += "\n  " + p;
  throw IntegrityError(what);
}

BundleInfo export_bundle(const RunConfig& config, const fs::path& bundle) {
  Pipeline pipeline(config);
  static constexpr std::array<Stage, 5> kRecorded{Stage::kGenerate, Stage::kParse, Stage::kEmbed, Stage::kFrames,
                                                  Stage::kStyle};
  std::vector<std::string> missing;
  for (auto s : kRecorded) {
    if (!pipeline.stage_complete(s)) missing.emplace_back(to_string(s));
  }
  if (!missing.empty()) {
    std::string what = "cannot export bundle, incomplete stage(s):";
    for (const auto& m : missing) what += " " + m;
    throw PreconditionError(what);
  }

  BundleInfo info;
  info.config = analysis_json(config);
  info.config_hash = sha256_hex(info.config.dump());
  const auto& cache = *pipeline.cache();
  for (const auto& hex : pipeline.manifest().cache_keys(kRecorded)) {
    const auto src = cache.path_for(gateway::CacheKey{hex});
    if (!fs::exists(src)) throw IntegrityError("cache envelope " + hex + " referenced by the manifest is missing");
    const auto rel = envelope_rel(hex);
    const auto dst = bundle / rel;
    fs::create_directories(dst.parent_path());
    const auto contents = read_text_file(src);
    write_text_file_atomic(dst, contents);
    info.files[rel] = sha256_hex(contents);
  }
  write_json_file(bundle / "bundle.json", Json{{"format", kBundleFormat},
                                               {"config", info.config},
                                               {"config_hash", info.config_hash},
                                               {"files", info.files}});
  log::info("exported " + std::to_string(info.files.size()) + " envelope(s) to " + bundle.string());
  return info;
}

RunOutcome replay(const fs::path& bundle, const fs::path& out_dir, std::size_t workers) {
  verify_bundle(bundle);
  Json doc = read_bundle_info(bundle).config;
  doc["mode"] = "replay";
  doc["bundle"] = bundle.string();
  doc["output_dir"] = out_dir.string();
  doc["workers"] = workers;
  Pipeline pipeline(load_run_config(doc));
  return pipeline.run_all();
}

}  // namespace polbias::pipeline
