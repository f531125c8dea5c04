#include "tabdoc/llm/chat.hpp"

#include "tabdoc/error.hpp"

namespace tabdoc::llm {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(FinishReason reason) noexcept {
  switch (reason) {
    case FinishReason::stop: return "stop";
    case FinishReason::length: return "length";
    case FinishReason::error: return "error";
  }
  return "error";
}

std::string ChatRequest::rendered_prompt() const {
  std::string out;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (i) out += "\n\n";
    out += messages[i].content;
  }
  return out;
}

ChatRequest make_request(std::string model, std::string prompt, ResponseFormat format) {
  ChatRequest req;
  req.model = std::move(model);
  req.messages.push_back({Role::user, std::move(prompt)});
  req.format = format;
  return req;
}

}  // namespace tabdoc::llm
