#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/gateway/types.hpp"

namespace polbias::gateway {

// Number of HTTP requests issued by this process. Replay runs must leave it unchanged.
std::uint64_t network_operation_count();

// Token bucket. acquire() blocks until a token is available.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second);
  void acquire();
  double rate() const { return rate_; }

 private:
  double rate_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

// One limiter per endpoint id, shared by every client of that endpoint.
std::shared_ptr<RateLimiter> shared_rate_limiter(const EndpointConfig& endpoint);

// A failed attempt. `retryable` distinguishes transient failures
// (connection errors, 429, 5xx) from permanent ones.
struct AttemptFailure {
  std::string message;
  bool retryable = true;
};

class RetryPolicy {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit RetryPolicy(int max_retries, std::chrono::milliseconds base_delay = std::chrono::milliseconds(250),
                       std::uint64_t jitter_seed = 0x5eed);

  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }
  int max_retries() const { return max_retries_; }

  // Calls `attempt` until it returns a value, a permanent failure occurs, or
  // max_retries retries are used. Throws TransportError with the attempt log.
  Json run(const std::string& what, const std::function<Json(int attempt)>& attempt) const;

  // Delay before retry number `retry` (1-based): base * 2^(retry-1) scaled by a jitter in [0.5, 1).
  std::chrono::milliseconds backoff(int retry) const;

 private:
  int max_retries_;
  std::chrono::milliseconds base_delay_;
  std::uint64_t jitter_seed_;
  Sleeper sleeper_;
};

// Thrown by attempt callbacks to signal a failed attempt.
struct AttemptError : std::exception {
  AttemptFailure failure;
  explicit AttemptError(AttemptFailure f) : failure(std::move(f)) {}
  const char* what() const noexcept override { return failure.message.c_str(); }
};

// POSTs `body` as JSON to endpoint.base_url + path and returns the parsed
// reply. Throws AttemptError on any failure; does not retry.
Json http_post_json(const EndpointConfig& endpoint, const std::string& path, const Json& body);

// Connectivity check: any HTTP reply counts as reachable. Returns the error otherwise.
std::optional<std::string> probe_endpoint(const EndpointConfig& endpoint, double timeout_s = 2.0);

}  // namespace polbias::gateway
