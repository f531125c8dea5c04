#include "tabdoc/eval/similarity.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <unicode/utf8.h>

namespace tabdoc::eval {
namespace {

std::vector<UChar32> code_points(std::string_view s) {
  std::vector<UChar32> out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t n = static_cast<int32_t>(s.size());
  for (int32_t i = 0; i < n;) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    // Keep malformed bytes distinguishable from each other.
    out.push_back(c < 0 ? -1 - static_cast<UChar32>(p[start]) : c);
  }
  return out;
}

std::set<std::string_view> tokens(std::string_view s) {
  std::set<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.insert(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string_view to_string(SimilarityKind k) noexcept {
  return k == SimilarityKind::normalized_edit ? "normalized_edit" : "token_jaccard";
}

std::optional<SimilarityKind> parse_similarity_kind(std::string_view text) {
  if (text == "normalized_edit" || text == "edit") return SimilarityKind::normalized_edit;
  if (text == "token_jaccard" || text == "jaccard") return SimilarityKind::token_jaccard;
  return std::nullopt;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  const auto x = code_points(a);
  const auto y = code_points(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

double similarity(std::string_view a, std::string_view b, SimilarityKind kind) {
  if (kind == SimilarityKind::normalized_edit) {
    const auto la = code_points(a).size();
    const auto lb = code_points(b).size();
    const auto longest = std::max(la, lb);
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
  }
  const auto ta = tokens(a);
  const auto tb = tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : ta) common += tb.count(t);
  return static_cast<double>(common) / static_cast<double>(ta.size() + tb.size() - common);
}

}  // namespace tabdoc::eval
