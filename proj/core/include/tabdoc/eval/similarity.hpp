#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace tabdoc::eval {

enum class SimilarityKind { normalized_edit, token_jaccard };

std::string_view to_string(SimilarityKind k) noexcept;
std::optional<SimilarityKind> parse_similarity_kind(std::string_view text);

/// Levenshtein distance over Unicode code points (invalid UTF-8 bytes count
/// as one unit each).
std::size_t edit_distance(std::string_view a, std::string_view b);

/// normalized_edit: 1 - d / max(len), and 1 for two empty strings.
/// token_jaccard: |A & B| / |A | B| over whitespace tokens, 1 when both are empty.
/// Inputs are expected to be normalize_cell output already.
double similarity(std::string_view a, std::string_view b, SimilarityKind kind);

}  // namespace tabdoc::eval
