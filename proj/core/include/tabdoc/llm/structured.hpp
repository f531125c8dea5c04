#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace tabdoc::llm {

/// Returns the first balanced `{...}` literal in `content` that parses as
/// JSON, skipping code fences and surrounding prose. Braces inside string
/// literals are ignored while balancing. No bracket repair is attempted.
/// Throws StructuredParseError carrying the byte offset of the first '{'
/// (or content.size() when there is none).
nlohmann::json extract_structured(std::string_view content);

}  // namespace tabdoc::llm
