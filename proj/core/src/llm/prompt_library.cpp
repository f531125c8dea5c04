#include "tabdoc/llm/prompt_library.hpp"

#include <algorithm>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"

namespace tabdoc::llm {
namespace detail {
const std::map<std::string, std::string>& builtin_prompt_table();
}

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

// Length of the placeholder starting at `pos` ('{' included), or 0.
std::size_t placeholder_at(std::string_view s, std::size_t pos) {
  if (s[pos] != '{' || pos + 1 >= s.size() || !ident_start(s[pos + 1])) return 0;
  std::size_t i = pos + 2;
  while (i < s.size() && ident_char(s[i])) ++i;
  return i < s.size() && s[i] == '}' ? i + 1 - pos : 0;
}

}  // namespace

std::string render_template(std::string_view tmpl, const TemplateVars& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::size_t len = placeholder_at(tmpl, i);
    if (!len) {
      out += tmpl[i++];
      continue;
    }
    const auto name = tmpl.substr(i + 1, len - 2);
    const auto it = vars.find(name);
    if (it == vars.end()) {
      throw Error(Errc::template_error, "no value for placeholder {" + std::string(name) + "}");
    }
    out += it->second;
    i += len;
  }
  return out;
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const std::size_t len = placeholder_at(tmpl, i);
    if (!len) continue;
    std::string name(tmpl.substr(i + 1, len - 2));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
    i += len - 1;
  }
  return out;
}

PromptLibrary PromptLibrary::builtin() {
  PromptLibrary lib;
  for (const auto& [name, text] : detail::builtin_prompt_table()) lib.templates_.emplace(name, text);
  return lib;
}

PromptLibrary PromptLibrary::with_overrides(const std::filesystem::path& dir) {
  PromptLibrary lib = builtin();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(Errc::io_error, "prompt directory " + dir.string() + " does not exist");
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    const auto stem = entry.path().stem().string();
    auto it = lib.templates_.find(stem);
    if (it == lib.templates_.end()) {
      throw Error(Errc::template_error, "unknown prompt template '" + stem + "' in " + dir.string());
    }
    it->second = io::read_text(entry.path());
  }
  return lib;
}

const std::string& PromptLibrary::get(std::string_view name) const {
  const auto it = templates_.find(name);
  if (it == templates_.end()) throw Error(Errc::template_error, "no prompt template named '" + std::string(name) + "'");
  return it->second;
}

std::string PromptLibrary::render(std::string_view name, const TemplateVars& vars) const {
  return render_template(get(name), vars);
}

std::vector<std::string> PromptLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : templates_) out.push_back(name);
  return out;
}

}  // namespace tabdoc::llm
