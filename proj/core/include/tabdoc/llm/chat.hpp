#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabdoc::llm {

enum class Role { system, user, assistant };

std::string_view to_string(Role role) noexcept;

struct Message {
  Role role = Role::user;
  std::string content;
};

enum class ResponseFormat { free_text, structured_object };

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  std::optional<int> max_output_tokens;
  ResponseFormat format = ResponseFormat::free_text;

  /// Message contents joined by blank lines. Transcript matchers and token
  /// estimates run against this string.
  std::string rendered_prompt() const;
};

/// Single user-turn request, the shape every agent prompt uses.
ChatRequest make_request(std::string model, std::string prompt,
                         ResponseFormat format = ResponseFormat::free_text);

enum class FinishReason { stop, length, error };

std::string_view to_string(FinishReason reason) noexcept;

struct Usage {
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;

  std::size_t total() const noexcept { return prompt_tokens + completion_tokens; }
  Usage& operator+=(const Usage& other) noexcept {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }
  friend bool operator==(const Usage&, const Usage&) = default;
};

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::stop;
  Usage usage;
};

/// One chat-completion call. Implementations throw TransportError for
/// transport failures (status 0 when no HTTP status was received) and
/// Error(auth_error) when the credential is rejected.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

}  // namespace tabdoc::llm
