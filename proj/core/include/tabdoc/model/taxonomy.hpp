#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace tabdoc::model {

/// Top-level extraction capability. `empty` marks a directly extractable cell.
enum class Category { TA, RI, DR, EF, CR, empty };

enum class SubCapability {
  format_transformation,
  unit_transformation,
  semantic_mapping,
  arithmetic_reasoning,
  logical_reasoning,
  temporal_reasoning,
  multihop_reasoning,
  attribute_distraction,
  value_distraction,
  missing_value_faithfulness,
  rule_based_resolution,
  constraint_based_resolution,
  source_aware_resolution,
};

inline constexpr std::array<Category, 5> kCapabilityCategories = {
    Category::TA, Category::RI, Category::DR, Category::EF, Category::CR};

inline constexpr std::array<SubCapability, 13> kSubCapabilities = {
    SubCapability::format_transformation,     SubCapability::unit_transformation,
    SubCapability::semantic_mapping,          SubCapability::arithmetic_reasoning,
    SubCapability::logical_reasoning,         SubCapability::temporal_reasoning,
    SubCapability::multihop_reasoning,        SubCapability::attribute_distraction,
    SubCapability::value_distraction,         SubCapability::missing_value_faithfulness,
    SubCapability::rule_based_resolution,     SubCapability::constraint_based_resolution,
    SubCapability::source_aware_resolution,
};

Category parent_category(SubCapability sub) noexcept;

/// Short code: "TA", "RI", ..., "EMPTY".
std::string_view to_string(Category c) noexcept;
/// Snake-case identifier, e.g. "unit_transformation".
std::string_view to_string(SubCapability s) noexcept;

std::string_view display_name(Category c) noexcept;
std::string_view display_name(SubCapability s) noexcept;

/// One-sentence working definitions rendered into agent prompts.
std::string_view definition(Category c) noexcept;
std::string_view definition(SubCapability s) noexcept;

/// Accepts the short code or the display name, case-insensitively.
std::optional<Category> parse_category(std::string_view text);
/// Accepts the snake-case identifier or the display name, case-insensitively.
std::optional<SubCapability> parse_sub_capability(std::string_view text);

/// A cell's capability label. Three shapes are representable:
///   EMPTY                 directly extractable, never carries a sub
///   coarse (TA, RI, ...)  category chosen, sub not yet refined
///   refined (TA/unit_...) category plus a sub that belongs to it
/// Construction rejects a sub under the wrong category or under EMPTY.
class CapabilityLabel {
 public:
  CapabilityLabel() = default;  // EMPTY
  CapabilityLabel(Category category, std::optional<SubCapability> sub);
  explicit CapabilityLabel(SubCapability sub);

  static CapabilityLabel empty() { return {}; }

  Category category() const noexcept { return category_; }
  std::optional<SubCapability> sub() const noexcept { return sub_; }

  bool is_empty() const noexcept { return category_ == Category::empty; }
  /// EMPTY or category+sub; coarse labels are not refined.
  bool is_refined() const noexcept { return is_empty() || sub_.has_value(); }

  /// "EMPTY", "CR" or "CR/constraint_based_resolution".
  std::string to_string() const;
  /// Inverse of to_string(); also accepts a bare sub name. Throws on junk.
  static CapabilityLabel parse(std::string_view text);

  friend bool operator==(const CapabilityLabel&, const CapabilityLabel&) = default;

 private:
  Category category_ = Category::empty;
  std::optional<SubCapability> sub_;
};

/// Taxonomy rendered as prompt text: categories only, or categories with subs.
std::string render_category_definitions();
std::string render_sub_capability_definitions();

}  // namespace tabdoc::model
