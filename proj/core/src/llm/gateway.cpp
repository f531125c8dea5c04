#include "tabdoc/llm/gateway.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "tabdoc/error.hpp"

namespace tabdoc::llm {

using namespace std::chrono;

milliseconds RetryPolicy::nominal_delay(int retry) const {
  const double raw = static_cast<double>(base_delay.count()) * std::pow(multiplier, retry - 1);
  return milliseconds(static_cast<long long>(std::min(raw, static_cast<double>(max_delay.count()))));
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options, Sleeper sleeper,
                 Clock clock)
    : backend_(std::move(backend)),
      options_(options),
      sleep_(sleeper ? std::move(sleeper) : Sleeper([](milliseconds d) { std::this_thread::sleep_for(d); })),
      now_(clock ? std::move(clock) : Clock([] { return steady_clock::now(); })),
      jitter_rng_(options.jitter_seed) {
  if (!backend_) throw Error(Errc::invalid_argument, "gateway needs a backend");
  if (options_.retry.max_attempts < 1) throw Error(Errc::invalid_argument, "max_attempts must be >= 1");
  if (options_.rate_limit_rpm && *options_.rate_limit_rpm == 0) {
    throw Error(Errc::invalid_argument, "rate limit must be positive");
  }
}

GatewayStats Gateway::stats() const {
  std::lock_guard lock(stats_mu_);
  return stats_;
}

void Gateway::wait_for_slot() {
  if (!options_.rate_limit_rpm) return;
  std::lock_guard lock(rate_mu_);
  const auto window = minutes(1);
  for (;;) {
    const auto now = now_();
    while (!dispatched_.empty() && now - dispatched_.front() >= window) dispatched_.pop_front();
    if (dispatched_.size() < *options_.rate_limit_rpm) {
      dispatched_.push_back(now);
      return;
    }
    sleep_(duration_cast<milliseconds>(dispatched_.front() + window - now) + milliseconds(1));
  }
}

milliseconds Gateway::backoff(int retry) {
  const auto nominal = options_.retry.nominal_delay(retry);
  const double j = options_.retry.jitter;
  if (j <= 0.0) return nominal;
  double factor;
  {
    std::lock_guard lock(stats_mu_);
    factor = std::uniform_real_distribution<double>(1.0 - j, 1.0 + j)(jitter_rng_);
  }
  return milliseconds(static_cast<long long>(static_cast<double>(nominal.count()) * factor));
}

ChatResponse Gateway::complete(const ChatRequest& request) {
  if (request.messages.empty()) throw Error(Errc::invalid_argument, "chat request has no messages");
  if (options_.token_budget) {
    std::lock_guard lock(stats_mu_);
    if (stats_.usage.total() >= *options_.token_budget) {
      ++stats_.failures;
      throw Error(Errc::budget_exceeded, "token budget of " + std::to_string(*options_.token_budget) +
                                             " spent (" + std::to_string(stats_.usage.total()) + " used)");
    }
  }

  for (int attempt = 1;; ++attempt) {
    wait_for_slot();
    {
      std::lock_guard lock(stats_mu_);
      ++stats_.attempts;
    }
    try {
      ChatResponse response = backend_->complete(request);
      std::lock_guard lock(stats_mu_);
      ++stats_.calls;
      stats_.usage += response.usage;
      return response;
    } catch (const TransportError& e) {
      const bool last = attempt >= options_.retry.max_attempts;
      if (!e.retryable() || last) {
        std::lock_guard lock(stats_mu_);
        ++stats_.failures;
        throw;
      }
    } catch (const Error&) {
      std::lock_guard lock(stats_mu_);
      ++stats_.failures;
      throw;
    }
    {
      std::lock_guard lock(stats_mu_);
      ++stats_.retries;
    }
    sleep_(backoff(attempt));
  }
}

}  // namespace tabdoc::llm
