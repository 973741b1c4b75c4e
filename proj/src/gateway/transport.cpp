#include "polbias/gateway/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "polbias/common/errors.hpp"
#include "polbias/common/random.hpp"

namespace polbias::gateway {
namespace {

std::atomic<std::uint64_t> g_network_ops{0};

}  // namespace

std::uint64_t network_operation_count() { return g_network_ops.load(); }

RateLimiter::RateLimiter(double per_second)
    : rate_(per_second),
      capacity_(std::max(1.0, per_second)),
      tokens_(std::max(1.0, per_second)),
      last_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (rate_ <= 0.0) return;
  std::unique_lock lock(mutex_);
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const double wait_s = (1.0 - tokens_) / rate_;
    // Sleeping under the lock keeps admission strictly serialized.
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
  }
}

std::shared_ptr<RateLimiter> shared_rate_limiter(const EndpointConfig& endpoint) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<RateLimiter>> limiters;
  std::lock_guard lock(mutex);
  auto& slot = limiters[endpoint.id];
  if (!slot || slot->rate() != endpoint.rate_limit) slot = std::make_shared<RateLimiter>(endpoint.rate_limit);
  return slot;
}

RetryPolicy::RetryPolicy(int max_retries, std::chrono::milliseconds base_delay, std::uint64_t jitter_seed)
    : max_retries_(max_retries),
      base_delay_(base_delay),
      jitter_seed_(jitter_seed),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

std::chrono::milliseconds RetryPolicy::backoff(int retry) const {
  auto rng = make_stream(jitter_seed_, {"retry", std::to_string(retry)});
  const double jitter = 0.5 + 0.5 * unit_uniform(rng);
  const double scaled = static_cast<double>(base_delay_.count()) * static_cast<double>(1LL << (retry - 1)) * jitter;
  return std::chrono::milliseconds(static_cast<long long>(scaled));
}

Json RetryPolicy::run(const std::string& what, const std::function<Json(int)>& attempt) const {
  std::vector<std::string> log;
  for (int i = 0; i <= max_retries_; ++i) {
    if (i > 0) sleeper_(backoff(i));
    try {
      return attempt(i);
    } catch (const AttemptError& e) {
      log.push_back("attempt " + std::to_string(i + 1) + ": " + e.failure.message);
      if (!e.failure.retryable) break;
    }
  }
  const std::string message = what + " failed after " + std::to_string(log.size()) + " attempt(s)";
  throw TransportError(message, std::move(log));
}

Json http_post_json(const EndpointConfig& endpoint, const std::string& path, const Json& body) {
  httplib::Client client(endpoint.base_url);
  const auto timeout = std::chrono::duration<double>(endpoint.timeout_s);
  const auto secs = static_cast<time_t>(endpoint.timeout_s);
  const auto usecs = static_cast<time_t>((timeout.count() - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (!endpoint.auth_token_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_token_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  ++g_network_ops;
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw AttemptError({"transport error: " + httplib::to_string(res.error()), true});
  }
  if (res->status < 200 || res->status >= 300) {
    const bool retryable = res->status == 429 || res->status >= 500;
    throw AttemptError({"HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200), retryable});
  }
  try {
    return Json::parse(res->body);
  } catch (const Json::parse_error& e) {
    throw AttemptError({std::string("malformed JSON reply: ") + e.what(), true});
  }
}

std::optional<std::string> probe_endpoint(const EndpointConfig& endpoint, double timeout_s) {
  httplib::Client client(endpoint.base_url);
  if (!client.is_valid()) return "invalid base_url '" + endpoint.base_url + "'";
  const auto secs = static_cast<time_t>(timeout_s);
  client.set_connection_timeout(secs, static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6));
  client.set_read_timeout(secs, 0);
  ++g_network_ops;
  auto res = client.Get("/");
  if (!res) return "unreachable: " + httplib::to_string(res.error());
  return std::nullopt;
}

}  // namespace polbias::gateway
