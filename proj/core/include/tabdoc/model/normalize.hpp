#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tabdoc::model {

/// What every NULL-like value normalizes to.
inline constexpr std::string_view kNullToken = "null";

/// Evaluation-time cell normalization. Applied in order:
///   1. Unicode simple case folding
///   2. trim, collapse internal whitespace to one space
///   3. null synonyms ("", "null", "n/a", "none", "-", "nan") become kNullToken
///   4. thousands separators dropped from numeric tokens ("3,480,000")
///   5. punctuation and ASCII symbols removed, except a '.' between digits,
///      a '-' or '/' between digits, and the '-' of a leading negative number
/// Steps repeat until the string stops changing, so the function is idempotent.
std::string normalize_cell(std::string_view raw);
/// NULL cells normalize to kNullToken.
std::string normalize_cell(const std::optional<std::string>& raw);
inline std::string normalize_cell(const std::string& raw) { return normalize_cell(std::string_view(raw)); }
inline std::string normalize_cell(const char* raw) { return normalize_cell(std::string_view(raw)); }

/// "the attribute {attribute} of entity {entity} is {value}". Throws
/// invalid_argument for a NULL value: NULL cells have no canonical evidence.
std::string canonical_evidence(std::string_view entity, std::string_view attribute,
                               const std::optional<std::string>& value);

/// Whitespace-delimited word count.
std::size_t count_tokens(std::string_view text);

/// Name-matching key: normalize_cell with all spaces removed, so
/// "Total Cost (USD)" and "total_cost_usd" agree.
std::string loose_name(std::string_view name);

/// Collapses runs of whitespace to one space and trims.
std::string collapse_whitespace(std::string_view text);

}  // namespace tabdoc::model
