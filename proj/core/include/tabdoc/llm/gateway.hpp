#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>

#include "tabdoc/llm/chat.hpp"

namespace tabdoc::llm {

struct RetryPolicy {
  int max_attempts = 3;  // total tries, including the first
  std::chrono::milliseconds base_delay{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};
  double jitter = 0.2;  // +/- fraction applied to each delay

  /// Delay before retry number `retry` (1-based), without jitter.
  std::chrono::milliseconds nominal_delay(int retry) const;
};

struct GatewayOptions {
  RetryPolicy retry;
  std::optional<std::size_t> token_budget;    // per-run ceiling, prompt + completion
  std::optional<unsigned> rate_limit_rpm;     // requests per rolling minute
  std::uint64_t jitter_seed = 0x7ab1e2d0cULL;
};

struct GatewayStats {
  std::size_t calls = 0;     // successful completions
  std::size_t attempts = 0;  // every dispatch, successful or not
  std::size_t retries = 0;
  std::size_t failures = 0;  // calls that surfaced an error
  Usage usage;
};

/// Front door for every model call: retries transient failures with
/// exponential backoff and jitter, enforces a token budget, and throttles to
/// a requests-per-minute limit. Safe to share between threads; dispatch is
/// serialized only while the rate limiter is saturated.
class Gateway {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit Gateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options = {},
                   Sleeper sleeper = {}, Clock clock = {});

  /// Throws budget_exceeded before dispatch once the budget is spent,
  /// auth_error without retrying, and the last TransportError once
  /// attempts run out or the failure is not retryable.
  ChatResponse complete(const ChatRequest& request);

  GatewayStats stats() const;
  const GatewayOptions& options() const noexcept { return options_; }

 private:
  void wait_for_slot();
  std::chrono::milliseconds backoff(int retry);

  std::shared_ptr<ChatBackend> backend_;
  GatewayOptions options_;
  Sleeper sleep_;
  Clock now_;

  mutable std::mutex stats_mu_;
  GatewayStats stats_;
  std::mt19937_64 jitter_rng_;

  std::mutex rate_mu_;
  std::deque<std::chrono::steady_clock::time_point> dispatched_;
};

}  // namespace tabdoc::llm
