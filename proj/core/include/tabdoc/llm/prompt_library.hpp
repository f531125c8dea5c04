#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabdoc::llm {

using TemplateVars = std::map<std::string, std::string, std::less<>>;

/// Substitutes `{name}` placeholders, where name matches [a-z_][a-z0-9_]*.
/// Any other brace is literal text, so JSON examples need no escaping.
/// Substituted values are inserted verbatim and never re-expanded.
/// Throws template_error for a placeholder with no value.
std::string render_template(std::string_view tmpl, const TemplateVars& vars);

/// Placeholder names in order of first appearance.
std::vector<std::string> template_placeholders(std::string_view tmpl);

/// Agent prompt templates: the built-in set compiled into the library, each
/// optionally replaced by `<dir>/<name>.txt`.
class PromptLibrary {
 public:
  static PromptLibrary builtin();
  /// Built-ins overridden by any matching file in `dir`. Files whose stem is
  /// not a known template are rejected so typos do not go unnoticed.
  static PromptLibrary with_overrides(const std::filesystem::path& dir);

  const std::string& get(std::string_view name) const;
  std::string render(std::string_view name, const TemplateVars& vars) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

}  // namespace tabdoc::llm
