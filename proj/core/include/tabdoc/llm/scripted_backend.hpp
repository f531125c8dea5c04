#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/llm/chat.hpp"

namespace tabdoc::llm {

/// One canned exchange. `match` is a substring of the rendered prompt, or a
/// shell glob over the whole prompt when it contains '*' or '?'. An empty
/// match accepts anything.
struct TranscriptEntry {
  std::string match;
  std::string response;
  std::size_t repeat = 1;  // times the entry can be consumed
  int status = 200;        // non-200 raises a TransportError instead of answering
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
  bool strict = false;
};

/// {"strict": bool, "entries": [{"match", "response", "repeat"?, "status"?}]}
/// or a bare entry array. A response given as an object is stored compact.
Transcript transcript_from_json(const nlohmann::json& j);
Transcript load_transcript(const std::filesystem::path& path);

bool prompt_matches(const std::string& match, const std::string& prompt);

/// Deterministic offline backend. Strict mode demands that each request match
/// the next unconsumed entry; otherwise the first unconsumed matching entry
/// answers. Either way a miss raises transcript_mismatch. Token usage is a
/// whitespace word count.
class ScriptedBackend : public ChatBackend {
 public:
  explicit ScriptedBackend(Transcript transcript);

  ChatResponse complete(const ChatRequest& request) override;

  /// Every rendered prompt received, in order.
  std::vector<std::string> prompts() const;
  std::size_t remaining() const;

 private:
  std::optional<std::size_t> find(const std::string& prompt) const;

  Transcript transcript_;
  std::vector<std::size_t> used_;
  std::vector<std::string> prompts_;
  mutable std::mutex mu_;
};

}  // namespace tabdoc::llm
