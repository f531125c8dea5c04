#include "tabdoc/llm/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"

namespace tabdoc::llm {

using nlohmann::json;

std::string resolve_api_key(const std::string& env_var) {
  if (env_var.empty()) throw Error(Errc::auth_error, "no credential environment variable configured");
  const char* value = std::getenv(env_var.c_str());
  if (!value || !*value) throw Error(Errc::auth_error, "environment variable " + env_var + " is not set");
  return value;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  const auto& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::invalid_argument, "base_url needs a scheme: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/chat/completions";
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  json body = {{"model", request.model}, {"temperature", request.temperature}};
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  body["messages"] = std::move(messages);
  if (request.max_output_tokens) body["max_tokens"] = *request.max_output_tokens;
  if (request.format == ResponseFormat::structured_object) {
    body["response_format"] = {{"type", "json_object"}};
  }

  httplib::Client client(origin_);
  const auto secs = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError(0, true, "request to " + origin_ + path_ + " failed: " + httplib::to_string(res.error()));
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    throw Error(Errc::auth_error, "credential rejected (HTTP " + std::to_string(status) + ")");
  }
  if (status != 200) {
    const bool retryable = status == 429 || status >= 500;
    throw TransportError(status, retryable, "HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200));
  }

  try {
    const json reply = json::parse(res->body);
    const auto& choice = reply.at("choices").at(0);
    ChatResponse out;
    const auto& content = choice.at("message").at("content");
    out.content = content.is_null() ? std::string{} : content.get<std::string>();
    const std::string reason = choice.value("finish_reason", std::string("stop"));
    out.finish_reason = reason == "stop"     ? FinishReason::stop
                        : reason == "length" ? FinishReason::length
                                             : FinishReason::error;
    if (reply.contains("usage") && reply["usage"].is_object()) {
      out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", std::size_t{0});
      out.usage.completion_tokens = reply["usage"].value("completion_tokens", std::size_t{0});
    }
    return out;
  } catch (const json::exception& e) {
    throw TransportError(status, false, std::string("malformed completion body: ") + e.what());
  }
}

}  // namespace tabdoc::llm
