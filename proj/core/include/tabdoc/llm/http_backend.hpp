#pragma once

#include <chrono>
#include <string>

#include "tabdoc/llm/chat.hpp"

namespace tabdoc::llm {

struct HttpBackendConfig {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key;   // resolved secret; never read from flags
  std::chrono::seconds timeout{300};
};

/// Reads the secret from the named environment variable. Throws auth_error
/// when it is unset or empty.
std::string resolve_api_key(const std::string& env_var);

/// Chat-completions client over HTTP(S). POSTs to `{base_url}/chat/completions`.
/// 401/403 raise auth_error; 429, 5xx and connection failures raise a
/// retryable TransportError; other statuses a non-retryable one.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  ChatResponse complete(const ChatRequest& request) override;

 private:
  HttpBackendConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // path prefix + /chat/completions
};

}  // namespace tabdoc::llm
