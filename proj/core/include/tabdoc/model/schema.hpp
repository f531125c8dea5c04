#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tabdoc::model {

enum class DataType { text, integer, decimal, date, enumeration, boolean };

std::string_view to_string(DataType t) noexcept;
std::optional<DataType> parse_data_type(std::string_view text);

/// Metadata for one column of the target schema.
struct AttributeSpec {
  std::string name;
  std::string description;
  DataType data_type = DataType::text;
  std::optional<std::string> unit;
  std::optional<std::string> format;
  /// Free-form value constraints. An enumeration attribute lists its allowed
  /// values in an entry of the form "in: A, B, C".
  std::vector<std::string> constraints;
  std::vector<std::string> examples;

  /// Values parsed from the "in:" constraint, empty when there is none.
  std::vector<std::string> allowed_values() const;

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

enum class CompareOp { lt, le, eq, ge, gt };

std::string_view to_string(CompareOp op) noexcept;
std::optional<CompareOp> parse_compare_op(std::string_view text);

/// Binary comparison between two attributes, e.g. Discharge_Date >= Admission_Date.
/// Used to steer evidence generation; never shown to extraction models.
struct CrossConstraint {
  std::string left;
  CompareOp op = CompareOp::eq;
  std::string right;

  std::string to_string() const;
  friend bool operator==(const CrossConstraint&, const CrossConstraint&) = default;
};

enum class ResolutionRuleKind { latest_timestamp, highest_precision, max, min };

std::string_view to_string(ResolutionRuleKind kind) noexcept;
std::optional<ResolutionRuleKind> parse_resolution_rule_kind(std::string_view text);

/// Conflict-resolution rule attached to an attribute. Explicit rules are part
/// of the schema a model sees; implicit ones are withheld like cross constraints.
struct ResolutionRule {
  std::string attribute;
  ResolutionRuleKind kind = ResolutionRuleKind::latest_timestamp;
  std::optional<std::string> auxiliary;
  bool is_explicit = true;

  std::string to_string() const;
  friend bool operator==(const ResolutionRule&, const ResolutionRule&) = default;
};

/// Target schema. Validated on construction:
///  - attribute names nonempty and unique
///  - enumeration attributes declare allowed values
///  - key attribute index in range and of text type
///  - cross constraints and resolution rules reference existing attributes,
///    and cross constraints compare attributes of comparable types
class Schema {
 public:
  Schema(std::string entity_type, std::vector<AttributeSpec> attributes,
         std::size_t key_attribute_index = 0, std::vector<CrossConstraint> cross_constraints = {},
         std::vector<ResolutionRule> resolution_rules = {});

  const std::string& entity_type() const noexcept { return entity_type_; }
  const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
  const AttributeSpec& attribute(std::size_t j) const { return attributes_.at(j); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }
  std::size_t key_attribute_index() const noexcept { return key_index_; }
  const AttributeSpec& key_attribute() const { return attributes_[key_index_]; }
  const std::vector<CrossConstraint>& cross_constraints() const noexcept { return cross_; }
  const std::vector<ResolutionRule>& resolution_rules() const noexcept { return rules_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> attribute_names() const;

  /// Columns referenced by any cross constraint or resolution rule.
  std::vector<std::size_t> constrained_columns() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::string entity_type_;
  std::vector<AttributeSpec> attributes_;
  std::size_t key_index_ = 0;
  std::vector<CrossConstraint> cross_;
  std::vector<ResolutionRule> rules_;
};

/// Which parts of the schema a rendering may expose.
enum class SchemaView {
  full,        // everything, including implicit constraints (synthesis agents)
  extraction,  // no cross constraints, no implicit resolution rules
};

/// Human-readable schema block used inside prompts.
std::string render_schema(const Schema& schema, SchemaView view);

nlohmann::json to_json(const Schema& schema);
Schema schema_from_json(const nlohmann::json& j);
Schema load_schema(const std::filesystem::path& path);

}  // namespace tabdoc::model
