#include "tabdoc/model/normalize.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "tabdoc/error.hpp"

namespace tabdoc::model {
namespace {

using CodePoints = std::vector<UChar32>;

constexpr std::array<std::string_view, 6> kNullSynonyms = {"", "null", "n/a", "none", "-", "nan"};

CodePoints decode(std::string_view s) {
  CodePoints out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? 0xFFFD : c);
  }
  return out;
}

std::string encode(const CodePoints& cps) {
  std::string out;
  out.reserve(cps.size());
  for (UChar32 c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) || c == 0x200B; }

bool is_digit(UChar32 c) { return c >= '0' && c <= '9'; }

bool is_punct(UChar32 c) {
  if (c < 0x80) return std::ispunct(static_cast<int>(c)) != 0;
  return u_ispunct(c) != 0;
}

CodePoints fold_and_collapse(const CodePoints& in) {
  CodePoints out;
  out.reserve(in.size());
  bool pending_space = false;
  for (UChar32 c : in) {
    if (is_space(c) || u_iscntrl(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(u_foldCase(c, U_FOLD_CASE_DEFAULT));
  }
  return out;
}

bool is_null_synonym(const std::string& s) {
  for (auto syn : kNullSynonyms) {
    if (s == syn) return true;
  }
  return false;
}

// [-+]?\d{1,3}(,\d{3})+(\.\d+)?
bool is_grouped_number(const CodePoints& cps, std::size_t begin, std::size_t end) {
  std::size_t i = begin;
  if (i < end && (cps[i] == '-' || cps[i] == '+')) ++i;
  std::size_t lead = 0;
  while (i < end && is_digit(cps[i])) {
    ++i;
    ++lead;
  }
  if (lead < 1 || lead > 3) return false;
  std::size_t groups = 0;
  while (i < end && cps[i] == ',') {
    ++i;
    for (int k = 0; k < 3; ++k, ++i) {
      if (i >= end || !is_digit(cps[i])) return false;
    }
    ++groups;
  }
  if (groups == 0) return false;
  if (i < end && cps[i] == '.') {
    ++i;
    std::size_t frac = 0;
    while (i < end && is_digit(cps[i])) {
      ++i;
      ++frac;
    }
    if (frac == 0) return false;
  }
  return i == end;
}

CodePoints strip_thousands(const CodePoints& in) {
  CodePoints out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == ' ') {
      out.push_back(' ');
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < in.size() && in[end] != ' ') ++end;
    const bool grouped = is_grouped_number(in, i, end);
    for (; i < end; ++i) {
      if (grouped && in[i] == ',') continue;
      out.push_back(in[i]);
    }
  }
  return out;
}

CodePoints strip_punctuation(const CodePoints& in) {
  CodePoints out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const UChar32 c = in[i];
    if (!is_punct(c)) {
      out.push_back(c);
      continue;
    }
    const bool prev_digit = i > 0 && is_digit(in[i - 1]);
    const bool next_digit = i + 1 < in.size() && is_digit(in[i + 1]);
    const bool token_start = i == 0 || in[i - 1] == ' ';
    const bool keep = (c == '.' && prev_digit && next_digit) ||
                      ((c == '-' || c == '/') && prev_digit && next_digit) ||
                      (c == '-' && token_start && next_digit);
    if (keep) out.push_back(c);
  }
  return out;
}

std::string normalize_once(std::string_view raw) {
  CodePoints cps = fold_and_collapse(decode(raw));
  std::string folded = encode(cps);
  if (is_null_synonym(folded)) return std::string(kNullToken);
  cps = strip_thousands(cps);
  cps = strip_punctuation(cps);
  std::string out = encode(fold_and_collapse(cps));
  if (is_null_synonym(out)) return std::string(kNullToken);
  return out;
}

}  // namespace

std::string normalize_cell(std::string_view raw) {
  std::string current = normalize_once(raw);
  // Converges in one or two passes; the bound guards against surprises.
  for (int pass = 0; pass < 8; ++pass) {
    std::string next = normalize_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::string normalize_cell(const std::optional<std::string>& raw) {
  return raw ? normalize_cell(std::string_view(*raw)) : std::string(kNullToken);
}

std::string canonical_evidence(std::string_view entity, std::string_view attribute,
                               const std::optional<std::string>& value) {
  if (!value) {
    throw Error(Errc::invalid_argument, "NULL cell '" + std::string(attribute) + "' of entity '" +
                                            std::string(entity) + "' has no canonical evidence");
  }
  std::string out = "the attribute ";
  out += attribute;
  out += " of entity ";
  out += entity;
  out += " is ";
  out += *value;
  return out;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::string loose_name(std::string_view name) {
  std::string out = normalize_cell(name);
  out.erase(std::remove(out.begin(), out.end(), ' '), out.end());
  return out;
}

}  // namespace tabdoc::model
