#include "tabdoc/model/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"

namespace tabdoc::model {
namespace {

using nlohmann::json;

std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool numeric(DataType t) { return t == DataType::integer || t == DataType::decimal; }

bool comparable(DataType a, DataType b) { return a == b || (numeric(a) && numeric(b)); }

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key) || j.at(key).is_null()) return out;
  for (const auto& item : j.at(key)) out.push_back(item.get<std::string>());
  return out;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

std::string_view to_string(DataType t) noexcept {
  switch (t) {
    case DataType::text: return "text";
    case DataType::integer: return "integer";
    case DataType::decimal: return "decimal";
    case DataType::date: return "date";
    case DataType::enumeration: return "enum";
    case DataType::boolean: return "boolean";
  }
  return "text";
}

std::optional<DataType> parse_data_type(std::string_view text) {
  const std::string key = lower(trim_copy(text));
  if (key == "text" || key == "string") return DataType::text;
  if (key == "integer" || key == "int") return DataType::integer;
  if (key == "decimal" || key == "float" || key == "number") return DataType::decimal;
  if (key == "date") return DataType::date;
  if (key == "enum" || key == "enumeration") return DataType::enumeration;
  if (key == "boolean" || key == "bool") return DataType::boolean;
  return std::nullopt;
}

std::string_view to_string(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::eq: return "=";
    case CompareOp::ge: return ">=";
    case CompareOp::gt: return ">";
  }
  return "=";
}

std::optional<CompareOp> parse_compare_op(std::string_view text) {
  const std::string key = trim_copy(text);
  if (key == "<") return CompareOp::lt;
  if (key == "<=" || key == "\xE2\x89\xA4") return CompareOp::le;
  if (key == "=" || key == "==") return CompareOp::eq;
  if (key == ">=" || key == "\xE2\x89\xA5") return CompareOp::ge;
  if (key == ">") return CompareOp::gt;
  return std::nullopt;
}

std::string CrossConstraint::to_string() const {
  return left + " " + std::string(model::to_string(op)) + " " + right;
}

std::string_view to_string(ResolutionRuleKind kind) noexcept {
  switch (kind) {
    case ResolutionRuleKind::latest_timestamp: return "latest_timestamp";
    case ResolutionRuleKind::highest_precision: return "highest_precision";
    case ResolutionRuleKind::max: return "max";
    case ResolutionRuleKind::min: return "min";
  }
  return "latest_timestamp";
}

std::optional<ResolutionRuleKind> parse_resolution_rule_kind(std::string_view text) {
  const std::string key = lower(trim_copy(text));
  if (key == "latest_timestamp") return ResolutionRuleKind::latest_timestamp;
  if (key == "highest_precision") return ResolutionRuleKind::highest_precision;
  if (key == "max") return ResolutionRuleKind::max;
  if (key == "min") return ResolutionRuleKind::min;
  return std::nullopt;
}

std::string ResolutionRule::to_string() const {
  std::string out;
  switch (kind) {
    case ResolutionRuleKind::latest_timestamp:
      out = "when sources conflict on " + attribute + ", keep the value with the most recent timestamp";
      break;
    case ResolutionRuleKind::highest_precision:
      out = "when sources conflict on " + attribute + ", keep the most precise value";
      break;
    case ResolutionRuleKind::max:
      out = "when sources conflict on " + attribute + ", keep the largest value";
      break;
    case ResolutionRuleKind::min:
      out = "when sources conflict on " + attribute + ", keep the smallest value";
      break;
  }
  if (auxiliary) out += " (as given by " + *auxiliary + ")";
  return out;
}

std::vector<std::string> AttributeSpec::allowed_values() const {
  std::vector<std::string> out;
  for (const auto& c : constraints) {
    std::string_view view(c);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front()))) {
      view.remove_prefix(1);
    }
    if (view.size() < 3 || lower(view.substr(0, 3)) != "in:") continue;
    view.remove_prefix(3);
    std::size_t start = 0;
    while (start <= view.size()) {
      auto comma = view.find(',', start);
      if (comma == std::string_view::npos) comma = view.size();
      auto item = trim_copy(view.substr(start, comma - start));
      if (!item.empty()) out.push_back(item);
      start = comma + 1;
    }
  }
  return out;
}

Schema::Schema(std::string entity_type, std::vector<AttributeSpec> attributes,
               std::size_t key_attribute_index, std::vector<CrossConstraint> cross_constraints,
               std::vector<ResolutionRule> resolution_rules)
    : entity_type_(std::move(entity_type)),
      attributes_(std::move(attributes)),
      key_index_(key_attribute_index),
      cross_(std::move(cross_constraints)),
      rules_(std::move(resolution_rules)) {
  if (attributes_.empty()) throw Error(Errc::invalid_argument, "schema has no attributes");
  std::set<std::string> seen;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw Error(Errc::invalid_argument, "attribute with empty name");
    if (!seen.insert(a.name).second) {
      throw Error(Errc::invalid_argument, "duplicate attribute name '" + a.name + "'");
    }
    if (a.data_type == DataType::enumeration && a.allowed_values().empty()) {
      throw Error(Errc::invalid_argument,
                  "enum attribute '" + a.name + "' needs an 'in: ...' constraint");
    }
  }
  if (key_index_ >= attributes_.size()) {
    throw Error(Errc::invalid_argument, "key attribute index out of range");
  }
  if (attributes_[key_index_].data_type != DataType::text) {
    throw Error(Errc::invalid_argument,
                "key attribute '" + attributes_[key_index_].name + "' must be text");
  }
  for (const auto& c : cross_) {
    auto l = index_of(c.left);
    auto r = index_of(c.right);
    if (!l || !r) {
      throw Error(Errc::invalid_argument, "cross constraint '" + c.to_string() +
                                              "' references an unknown attribute");
    }
    if (!comparable(attributes_[*l].data_type, attributes_[*r].data_type)) {
      throw Error(Errc::invalid_argument,
                  "cross constraint '" + c.to_string() + "' compares incompatible types");
    }
  }
  for (const auto& rule : rules_) {
    if (!index_of(rule.attribute) || (rule.auxiliary && !index_of(*rule.auxiliary))) {
      throw Error(Errc::invalid_argument,
                  "resolution rule on '" + rule.attribute + "' references an unknown attribute");
    }
  }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < attributes_.size(); ++j) {
    if (attributes_[j].name == name) return j;
  }
  return std::nullopt;
}

std::vector<std::string> Schema::attribute_names() const {
  std::vector<std::string> out;
  out.reserve(attributes_.size());
  for (const auto& a : attributes_) out.push_back(a.name);
  return out;
}

std::vector<std::size_t> Schema::constrained_columns() const {
  std::set<std::size_t> cols;
  for (const auto& c : cross_) {
    cols.insert(*index_of(c.left));
    cols.insert(*index_of(c.right));
  }
  for (const auto& r : rules_) {
    cols.insert(*index_of(r.attribute));
    if (r.auxiliary) cols.insert(*index_of(*r.auxiliary));
  }
  return {cols.begin(), cols.end()};
}

std::string render_schema(const Schema& schema, SchemaView view) {
  std::ostringstream out;
  out << "Entity type: " << schema.entity_type() << "\n";
  out << "Attributes (in column order):\n";
  for (std::size_t j = 0; j < schema.attribute_count(); ++j) {
    const auto& a = schema.attribute(j);
    out << j + 1 << ". " << a.name << " [" << to_string(a.data_type);
    if (j == schema.key_attribute_index()) out << ", entity identifier";
    out << "]";
    if (!a.description.empty()) out << ": " << a.description;
    out << "\n";
    if (a.unit) out << "   unit: " << *a.unit << "\n";
    if (a.format) out << "   format: " << *a.format << "\n";
    for (const auto& c : a.constraints) out << "   constraint: " << c << "\n";
    if (!a.examples.empty()) {
      out << "   examples: ";
      for (std::size_t k = 0; k < a.examples.size(); ++k) {
        out << (k ? ", " : "") << a.examples[k];
      }
      out << "\n";
    }
  }
  std::vector<const ResolutionRule*> rules;
  for (const auto& r : schema.resolution_rules()) {
    if (view == SchemaView::full || r.is_explicit) rules.push_back(&r);
  }
  if (!rules.empty()) {
    out << "Resolution rules:\n";
    for (const auto* r : rules) out << "- " << r->to_string() << "\n";
  }
  if (view == SchemaView::full && !schema.cross_constraints().empty()) {
    out << "Cross-column constraints:\n";
    for (const auto& c : schema.cross_constraints()) out << "- " << c.to_string() << "\n";
  }
  return out.str();
}

json to_json(const Schema& schema) {
  json attrs = json::array();
  for (const auto& a : schema.attributes()) {
    json aj = {{"name", a.name},
               {"description", a.description},
               {"data_type", to_string(a.data_type)},
               {"constraints", a.constraints},
               {"examples", a.examples}};
    if (a.unit) aj["unit"] = *a.unit;
    if (a.format) aj["format"] = *a.format;
    attrs.push_back(std::move(aj));
  }
  json cross = json::array();
  for (const auto& c : schema.cross_constraints()) {
    cross.push_back({{"left", c.left}, {"op", to_string(c.op)}, {"right", c.right}});
  }
  json rules = json::array();
  for (const auto& r : schema.resolution_rules()) {
    json rj = {{"attribute", r.attribute}, {"rule", to_string(r.kind)}, {"explicit", r.is_explicit}};
    if (r.auxiliary) rj["auxiliary"] = *r.auxiliary;
    rules.push_back(std::move(rj));
  }
  return {{"entity_type", schema.entity_type()},
          {"key_attribute", schema.key_attribute().name},
          {"attributes", std::move(attrs)},
          {"cross_constraints", std::move(cross)},
          {"resolution_rules", std::move(rules)}};
}

Schema schema_from_json(const json& j) {
  try {
    std::vector<AttributeSpec> attrs;
    for (const auto& aj : j.at("attributes")) {
      AttributeSpec a;
      a.name = aj.at("name").get<std::string>();
      a.description = aj.value("description", std::string{});
      const auto type_text = aj.value("data_type", std::string{"text"});
      auto type = parse_data_type(type_text);
      if (!type) throw Error(Errc::parse_error, "unknown data_type '" + type_text + "'");
      a.data_type = *type;
      a.unit = optional_string(aj, "unit");
      a.format = optional_string(aj, "format");
      a.constraints = string_list(aj, "constraints");
      a.examples = string_list(aj, "examples");
      attrs.push_back(std::move(a));
    }
    std::size_t key_index = 0;
    if (j.contains("key_attribute_index")) {
      key_index = j.at("key_attribute_index").get<std::size_t>();
    } else if (j.contains("key_attribute")) {
      const auto key = j.at("key_attribute").get<std::string>();
      auto it = std::find_if(attrs.begin(), attrs.end(),
                             [&](const AttributeSpec& a) { return a.name == key; });
      if (it == attrs.end()) throw Error(Errc::parse_error, "unknown key_attribute '" + key + "'");
      key_index = static_cast<std::size_t>(it - attrs.begin());
    }
    std::vector<CrossConstraint> cross;
    if (j.contains("cross_constraints")) {
      for (const auto& cj : j.at("cross_constraints")) {
        const auto op_text = cj.at("op").get<std::string>();
        auto op = parse_compare_op(op_text);
        if (!op) throw Error(Errc::parse_error, "unknown comparison operator '" + op_text + "'");
        cross.push_back({cj.at("left").get<std::string>(), *op, cj.at("right").get<std::string>()});
      }
    }
    std::vector<ResolutionRule> rules;
    if (j.contains("resolution_rules")) {
      for (const auto& rj : j.at("resolution_rules")) {
        const auto kind_text = rj.at("rule").get<std::string>();
        auto kind = parse_resolution_rule_kind(kind_text);
        if (!kind) throw Error(Errc::parse_error, "unknown resolution rule '" + kind_text + "'");
        rules.push_back({rj.at("attribute").get<std::string>(), *kind,
                         optional_string(rj, "auxiliary"), rj.value("explicit", true)});
      }
    }
    return Schema(j.value("entity_type", std::string{}), std::move(attrs), key_index,
                  std::move(cross), std::move(rules));
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed schema: ") + e.what());
  }
}

Schema load_schema(const std::filesystem::path& path) {
  return schema_from_json(io::read_json(path));
}

}  // namespace tabdoc::model
