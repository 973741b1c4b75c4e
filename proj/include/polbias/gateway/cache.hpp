#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/gateway/types.hpp"

namespace polbias::gateway {

struct CacheKey {
  std::string hex;

  auto operator<=>(const CacheKey&) const = default;
};

// Digest of (call kind, model name, canonical payload, seed). The payload is
// serialized through nlohmann's sorted-key dump, so key order in the caller's
// object does not matter.
CacheKey make_cache_key(CallKind kind, std::string_view model_name, const Json& payload, std::uint64_t seed);

struct Envelope {
  Json request;
  Json response;
  std::string timestamp;
  std::string backend_id;
};

Json to_json(const Envelope& e);
Envelope envelope_from_json(const Json& j);

// Content-addressed envelope store: <root>/<hex[0:2]>/<hex>.json.
// Readers never block each other; writes for one key are serialized and the
// first completed write wins. Every key read or written is recorded so a run
// can list exactly the envelopes it depends on.
class ArtifactCache {
 public:
  ArtifactCache(std::filesystem::path root, bool read_only);

  std::optional<Envelope> lookup(const CacheKey& key);
  void store(const CacheKey& key, const Envelope& envelope);

  std::filesystem::path path_for(const CacheKey& key) const;
  const std::filesystem::path& root() const { return root_; }
  bool read_only() const { return read_only_; }

  std::vector<std::string> touched_keys() const;
  void clear_touched();

 private:
  void touch(const CacheKey& key);

  std::filesystem::path root_;
  bool read_only_;
  std::array<std::mutex, 64> stripes_;
  mutable std::mutex touched_mutex_;
  std::set<std::string> touched_;
};

// Collects the cache keys touched by the current thread while it is alive.
// Recorders nest; keys go to the innermost one.
class KeyRecorder {
 public:
  KeyRecorder();
  ~KeyRecorder();
  KeyRecorder(const KeyRecorder&) = delete;
  KeyRecorder& operator=(const KeyRecorder&) = delete;

  const std::set<std::string>& keys() const { return keys_; }

 private:
  friend class ArtifactCache;
  KeyRecorder* previous_;
  std::set<std::string> keys_;
};

std::string utc_timestamp();

}  // namespace polbias::gateway
