#include "tabdoc/llm/structured.hpp"

#include <optional>

#include "tabdoc/error.hpp"

namespace tabdoc::llm {
namespace {

// End offset (one past the closing brace) of the object opening at `start`.
std::optional<std::size_t> balanced_end(std::string_view s, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::nullopt;
}

}  // namespace

nlohmann::json extract_structured(std::string_view content) {
  const auto first = content.find('{');
  for (auto pos = first; pos != std::string_view::npos; pos = content.find('{', pos + 1)) {
    const auto end = balanced_end(content, pos);
    if (!end) continue;
    auto parsed = nlohmann::json::parse(content.substr(pos, *end - pos), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  const std::size_t offset = first == std::string_view::npos ? content.size() : first;
  throw StructuredParseError(offset, first == std::string_view::npos
                                         ? "no structured object in model output"
                                         : "no balanced, parseable object in model output");
}

}  // namespace tabdoc::llm
