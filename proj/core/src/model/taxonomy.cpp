#include "tabdoc/model/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tabdoc/error.hpp"

namespace tabdoc::model {
namespace {

std::string fold_ascii(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || ch == '-' || ch == '_' || ch == '&') continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Category parent_category(SubCapability sub) noexcept {
  switch (sub) {
    case SubCapability::format_transformation:
    case SubCapability::unit_transformation:
    case SubCapability::semantic_mapping:
      return Category::TA;
    case SubCapability::arithmetic_reasoning:
    case SubCapability::logical_reasoning:
    case SubCapability::temporal_reasoning:
    case SubCapability::multihop_reasoning:
      return Category::RI;
    case SubCapability::attribute_distraction:
    case SubCapability::value_distraction:
      return Category::DR;
    case SubCapability::missing_value_faithfulness:
      return Category::EF;
    case SubCapability::rule_based_resolution:
    case SubCapability::constraint_based_resolution:
    case SubCapability::source_aware_resolution:
      return Category::CR;
  }
  return Category::empty;
}

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::TA: return "TA";
    case Category::RI: return "RI";
    case Category::DR: return "DR";
    case Category::EF: return "EF";
    case Category::CR: return "CR";
    case Category::empty: return "EMPTY";
  }
  return "EMPTY";
}

std::string_view to_string(SubCapability s) noexcept {
  switch (s) {
    case SubCapability::format_transformation: return "format_transformation";
    case SubCapability::unit_transformation: return "unit_transformation";
    case SubCapability::semantic_mapping: return "semantic_mapping";
    case SubCapability::arithmetic_reasoning: return "arithmetic_reasoning";
    case SubCapability::logical_reasoning: return "logical_reasoning";
    case SubCapability::temporal_reasoning: return "temporal_reasoning";
    case SubCapability::multihop_reasoning: return "multihop_reasoning";
    case SubCapability::attribute_distraction: return "attribute_distraction";
    case SubCapability::value_distraction: return "value_distraction";
    case SubCapability::missing_value_faithfulness: return "missing_value_faithfulness";
    case SubCapability::rule_based_resolution: return "rule_based_resolution";
    case SubCapability::constraint_based_resolution: return "constraint_based_resolution";
    case SubCapability::source_aware_resolution: return "source_aware_resolution";
  }
  return "";
}

std::string_view display_name(Category c) noexcept {
  switch (c) {
    case Category::TA: return "Transformative Alignment";
    case Category::RI: return "Reasoning & Inference";
    case Category::DR: return "Distractor Robustness";
    case Category::EF: return "Evidence Faithfulness";
    case Category::CR: return "Conflict Resolution";
    case Category::empty: return "Empty";
  }
  return "Empty";
}

std::string_view display_name(SubCapability s) noexcept {
  switch (s) {
    case SubCapability::format_transformation: return "Format Transformation";
    case SubCapability::unit_transformation: return "Unit Transformation";
    case SubCapability::semantic_mapping: return "Semantic Mapping";
    case SubCapability::arithmetic_reasoning: return "Arithmetic Reasoning";
    case SubCapability::logical_reasoning: return "Logical Reasoning";
    case SubCapability::temporal_reasoning: return "Temporal Reasoning";
    case SubCapability::multihop_reasoning: return "Multi-hop Reasoning";
    case SubCapability::attribute_distraction: return "Attribute Distraction";
    case SubCapability::value_distraction: return "Value Distraction";
    case SubCapability::missing_value_faithfulness: return "Missing Value Faithfulness";
    case SubCapability::rule_based_resolution: return "Rule-based Resolution";
    case SubCapability::constraint_based_resolution: return "Constraint-based Resolution";
    case SubCapability::source_aware_resolution: return "Source-aware Resolution";
  }
  return "";
}

std::string_view definition(Category c) noexcept {
  switch (c) {
    case Category::TA:
      return "the value appears in the text in a form that violates the schema and must be "
             "converted into an equivalent schema-conformant form";
    case Category::RI:
      return "the value is not stated outright and must be derived from partial or scattered "
             "statements";
    case Category::DR:
      return "the text also mentions similar-looking but wrong candidates that must be ignored";
    case Category::EF:
      return "the text gives no support for a value, so the correct output is NULL";
    case Category::CR:
      return "the text gives several conflicting values and one must be selected";
    case Category::empty:
      return "the value is stated explicitly and can be copied directly";
  }
  return "";
}

std::string_view definition(SubCapability s) noexcept {
  switch (s) {
    case SubCapability::format_transformation:
      return "the schema fixes a format (e.g. yyyy-mm-dd) that differs from the text's";
    case SubCapability::unit_transformation:
      return "the schema fixes a unit or scale that differs from the text's";
    case SubCapability::semantic_mapping:
      return "the text uses a related concept that must be mapped onto the schema's "
             "canonical representation (e.g. 'silver medal' to rank 2)";
    case SubCapability::arithmetic_reasoning:
      return "the value must be computed from numbers given in the text";
    case SubCapability::logical_reasoning:
      return "the value follows from logical conditions stated in the text";
    case SubCapability::temporal_reasoning:
      return "the value follows from temporal relations between described events";
    case SubCapability::multihop_reasoning:
      return "the supporting statements are spread over several places and must be chained";
    case SubCapability::attribute_distraction:
      return "the text contains other attributes with similar meaning or form";
    case SubCapability::value_distraction:
      return "the text lists several candidate values for the attribute, including outdated "
             "or superseded ones";
    case SubCapability::missing_value_faithfulness:
      return "the value is absent or not uniquely inferable; NULL must be produced";
    case SubCapability::rule_based_resolution:
      return "conflicts are settled by an explicit rule given in the schema";
    case SubCapability::constraint_based_resolution:
      return "conflicts are settled by an implicit cross-attribute constraint";
    case SubCapability::source_aware_resolution:
      return "conflicts are settled by weighing the reliability of the reporting sources";
  }
  return "";
}

std::optional<Category> parse_category(std::string_view text) {
  const std::string key = fold_ascii(text);
  if (key.empty()) return std::nullopt;
  if (key == "empty" || key == "none" || key == "direct") return Category::empty;
  for (Category c : kCapabilityCategories) {
    if (key == fold_ascii(to_string(c)) || key == fold_ascii(display_name(c))) return c;
  }
  return std::nullopt;
}

std::optional<SubCapability> parse_sub_capability(std::string_view text) {
  const std::string key = fold_ascii(text);
  if (key.empty()) return std::nullopt;
  for (SubCapability s : kSubCapabilities) {
    if (key == fold_ascii(to_string(s)) || key == fold_ascii(display_name(s))) return s;
  }
  return std::nullopt;
}

CapabilityLabel::CapabilityLabel(Category category, std::optional<SubCapability> sub)
    : category_(category), sub_(sub) {
  if (sub_ && category_ == Category::empty) {
    throw Error(Errc::invalid_argument,
                "EMPTY label cannot carry sub-capability " + std::string(model::to_string(*sub_)));
  }
  if (sub_ && parent_category(*sub_) != category_) {
    throw Error(Errc::invalid_argument, "sub-capability " + std::string(model::to_string(*sub_)) +
                                            " does not belong to " +
                                            std::string(model::to_string(category_)));
  }
}

CapabilityLabel::CapabilityLabel(SubCapability sub) : category_(parent_category(sub)), sub_(sub) {}

std::string CapabilityLabel::to_string() const {
  std::string out(model::to_string(category_));
  if (sub_) {
    out += '/';
    out += model::to_string(*sub_);
  }
  return out;
}

CapabilityLabel CapabilityLabel::parse(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto cat = parse_category(text.substr(0, slash));
    auto sub = parse_sub_capability(text.substr(slash + 1));
    if (!cat || !sub) {
      throw Error(Errc::parse_error, "unknown capability label '" + std::string(text) + "'");
    }
    return CapabilityLabel(*cat, sub);
  }
  if (auto cat = parse_category(text)) return CapabilityLabel(*cat, std::nullopt);
  if (auto sub = parse_sub_capability(text)) return CapabilityLabel(*sub);
  throw Error(Errc::parse_error, "unknown capability label '" + std::string(text) + "'");
}

std::string render_category_definitions() {
  std::ostringstream out;
  for (Category c : kCapabilityCategories) {
    out << "- " << to_string(c) << " (" << display_name(c) << "): " << definition(c) << "\n";
  }
  out << "- EMPTY: " << definition(Category::empty) << "\n";
  return out.str();
}

std::string render_sub_capability_definitions() {
  std::ostringstream out;
  for (Category c : kCapabilityCategories) {
    out << "- " << to_string(c) << " (" << display_name(c) << ")\n";
    for (SubCapability s : kSubCapabilities) {
      if (parent_category(s) != c) continue;
      out << "  - " << to_string(s) << ": " << definition(s) << "\n";
    }
  }
  return out.str();
}

}  // namespace tabdoc::model
