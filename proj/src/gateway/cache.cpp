#include "polbias/gateway/cache.hpp"

#include <chrono>
#include <ctime>

#include "polbias/common/digest.hpp"
#include "polbias/common/errors.hpp"

namespace polbias::gateway {
namespace fs = std::filesystem;

CacheKey make_cache_key(CallKind kind, std::string_view model_name, const Json& payload, std::uint64_t seed) {
  const Json material{{"kind", std::string(to_string(kind))},
                      {"model", std::string(model_name)},
                      {"payload", payload},
                      {"seed", seed}};
  return CacheKey{sha256_hex(material.dump())};
}

Json to_json(const Envelope& e) {
  return Json{{"request", e.request},
              {"response", e.response},
              {"timestamp", e.timestamp},
              {"backend_id", e.backend_id}};
}

Envelope envelope_from_json(const Json& j) {
  return Envelope{j.at("request"), j.at("response"), j.value("timestamp", ""), j.at("backend_id").get<std::string>()};
}

ArtifactCache::ArtifactCache(fs::path root, bool read_only) : root_(std::move(root)), read_only_(read_only) {
  if (!read_only_) fs::create_directories(root_);
}

fs::path ArtifactCache::path_for(const CacheKey& key) const {
  return root_ / key.hex.substr(0, 2) / (key.hex + ".json");
}

namespace {
thread_local KeyRecorder* active_recorder = nullptr;
}  // namespace

KeyRecorder::KeyRecorder() : previous_(active_recorder) { active_recorder = this; }
KeyRecorder::~KeyRecorder() { active_recorder = previous_; }

void ArtifactCache::touch(const CacheKey& key) {
  if (active_recorder) active_recorder->keys_.insert(key.hex);
  std::lock_guard lock(touched_mutex_);
  touched_.insert(key.hex);
}

std::optional<Envelope> ArtifactCache::lookup(const CacheKey& key) {
  const auto path = path_for(key);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  Envelope env;
  try {
    env = envelope_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw IntegrityError("corrupt cache envelope " + path.string() + ": " + e.what());
  }
  touch(key);
  return env;
}

void ArtifactCache::store(const CacheKey& key, const Envelope& envelope) {
  if (read_only_) throw Error("attempt to write into a read-only cache at " + root_.string());
  const auto path = path_for(key);
  auto& stripe = stripes_[std::stoul(key.hex.substr(0, 2), nullptr, 16) % stripes_.size()];
  {
    std::lock_guard lock(stripe);
    std::error_code ec;
    if (!fs::exists(path, ec)) write_text_file_atomic(path, to_json(envelope).dump() + "\n");
  }
  touch(key);
}

std::vector<std::string> ArtifactCache::touched_keys() const {
  std::lock_guard lock(touched_mutex_);
  return {touched_.begin(), touched_.end()};
}

void ArtifactCache::clear_touched() {
  std::lock_guard lock(touched_mutex_);
  touched_.clear();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace polbias::gateway
