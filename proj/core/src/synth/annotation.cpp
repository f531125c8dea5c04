#include "tabdoc/synth/annotation.hpp"

#include <map>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/llm/structured.hpp"
#include "tabdoc/model/normalize.hpp"
#include "tabdoc/model/schema.hpp"
#include "tabdoc/synth/render.hpp"

namespace tabdoc::synth {

using model::CapabilityLabel;
using model::CapabilityMatrix;
using model::CellRef;
using model::Table;
using nlohmann::json;

namespace {

// Exact-then-loose lookup from names to indices.
class NameIndex {
 public:
  void add(const std::string& name, std::size_t idx) {
    exact_.emplace(name, idx);
    loose_.emplace(model::loose_name(name), idx);
  }
  std::optional<std::size_t> find(const std::string& name) const {
    if (auto it = exact_.find(name); it != exact_.end()) return it->second;
    if (auto it = loose_.find(model::loose_name(name)); it != loose_.end()) return it->second;
    return std::nullopt;
  }

 private:
  std::map<std::string, std::size_t> exact_;
  std::map<std::string, std::size_t> loose_;
};

std::optional<CapabilityLabel> read_label(const json& v) {
  const json* s = &v;
  if (v.is_array()) {
    if (v.empty()) return std::nullopt;
    s = &v.front();
  }
  if (!s->is_string()) return std::nullopt;
  try {
    return CapabilityLabel::parse(s->get<std::string>());
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string render_pending(const Table& table, const std::vector<CellRef>& pending) {
  std::string out = "\n";
  for (const auto& ref : pending) {
    out += "- " + cell_name(table, ref) + " = " + table.at(ref).value.value_or("NULL") + "\n";
  }
  return out;
}

}  // namespace

CapabilityMatrix seed_matrix(const Table& table) {
  CapabilityMatrix m(table.rows(), table.cols());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (table.at(r, c).is_null()) m.set({r, c}, CapabilityLabel(model::SubCapability::missing_value_faithfulness));
    }
  }
  return m;
}

CapabilityMatrix parse_annotation(std::string_view reply, const Table& table, const std::vector<CellRef>& pending) {
  json parsed;
  try {
    parsed = llm::extract_structured(reply);
  } catch (const StructuredParseError& e) {
    throw Error(Errc::annotation_parse_error, e.what());
  }
  if (!parsed.contains("assignments") || !parsed["assignments"].is_object()) {
    throw Error(Errc::annotation_parse_error, "reply has no \"assignments\" object");
  }

  NameIndex rows;
  for (std::size_t r = 0; r < table.rows(); ++r) rows.add(table.entity(r), r);
  NameIndex cols;
  for (std::size_t c = 0; c < table.cols(); ++c) cols.add(table.schema().attribute(c).name, c);
  const std::set<CellRef> wanted(pending.begin(), pending.end());

  CapabilityMatrix out(table.rows(), table.cols());
  for (const auto& [entity, attrs] : parsed["assignments"].items()) {
    const auto r = rows.find(entity);
    if (!r || !attrs.is_object()) continue;
    for (const auto& [attribute, value] : attrs.items()) {
      const auto c = cols.find(attribute);
      if (!c) continue;
      const CellRef ref{*r, *c};
      if (!wanted.count(ref)) continue;
      if (auto label = read_label(value)) out.set(ref, *label);
    }
  }
  return out;
}

CapabilityMatrix annotate_capabilities(const Table& table, llm::AgentRuntime& agents,
                                       const std::vector<CellRef>& pending) {
  const llm::TemplateVars vars = {
      {"markdown_table", "\n" + model::render_markdown(table)},
      {"table_metadata", "\n" + model::render_schema(table.schema(), model::SchemaView::full)},
      {"capability_definition", "\n" + model::render_category_definitions()},
      {"pending_cells", render_pending(table, pending)},
  };
  const auto reply = agents.ask("annotator", vars, llm::ResponseFormat::structured_object);
  return parse_annotation(reply.content, table, pending);
}

std::vector<CellRef> check_annotation_completeness(const CapabilityMatrix& matrix) { return matrix.holes(); }

AnnotationOutcome annotation_loop(const Table& table, llm::AgentRuntime& agents, const LoopConfig& cfg) {
  cfg.validate();
  AnnotationOutcome out{seed_matrix(table), 0, {}, {}};
  for (int round = 0; round < cfg.annotation_rounds; ++round) {
    const auto holes = check_annotation_completeness(out.matrix);
    if (holes.empty()) break;
    ++out.rounds;
    try {
      const auto labels = annotate_capabilities(table, agents, holes);
      for (const auto& ref : holes) {
        if (const auto& l = labels.at(ref)) out.matrix.set(ref, *l);
      }
    } catch (const Error& e) {
      if (e.code() != Errc::annotation_parse_error) throw;
      out.problems.push_back("round " + std::to_string(round + 1) + ": " + e.what());
    }
  }
  out.fallback_cells = check_annotation_completeness(out.matrix);
  for (const auto& ref : out.fallback_cells) out.matrix.set(ref, CapabilityLabel::empty());
  return out;
}

}  // namespace tabdoc::synth
