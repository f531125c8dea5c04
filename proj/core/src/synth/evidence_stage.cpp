#include "tabdoc/synth/evidence_stage.hpp"

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/llm/structured.hpp"
#include "tabdoc/model/normalize.hpp"
#include "tabdoc/model/schema.hpp"
#include "tabdoc/synth/render.hpp"

namespace tabdoc::synth {

using model::CapabilityLabel;
using model::CellRef;
using model::EvidenceItem;
using model::Table;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

model::SubCapability first_sub_of(model::Category c) {
  for (auto s : model::kSubCapabilities) {
    if (model::parent_category(s) == c) return s;
  }
  throw Error(Errc::invalid_argument, "category has no sub-capability");
}

}  // namespace

std::string evidence_id(std::size_t ordinal) { return "e" + std::to_string(ordinal); }

RefinerProposal parse_refiner_reply(std::string_view reply) {
  json j;
  try {
    j = llm::extract_structured(reply);
  } catch (const StructuredParseError& e) {
    throw Error(Errc::parse_error, e.what());
  }
  if (!j.contains("sub_capability") || !j["sub_capability"].is_string()) {
    throw Error(Errc::parse_error, "refiner reply lacks \"sub_capability\"");
  }
  const auto sub_text = j["sub_capability"].get<std::string>();
  auto sub = model::parse_sub_capability(sub_text);
  if (!sub) {
    // Accept "CR/constraint_based_resolution" as well.
    try {
      sub = CapabilityLabel::parse(sub_text).sub();
    } catch (const Error&) {
    }
  }
  if (!sub) throw Error(Errc::parse_error, "unknown sub-capability '" + sub_text + "'");

  const char* key = j.contains("evidence") ? "evidence" : "fragments";
  if (!j.contains(key)) throw Error(Errc::parse_error, "refiner reply lacks \"evidence\"");
  RefinerProposal p{*sub, {}};
  const auto& ev = j[key];
  if (ev.is_string()) {
    if (auto t = trim(ev.get<std::string>()); !t.empty()) p.fragments.push_back(std::move(t));
  } else if (ev.is_array()) {
    for (const auto& f : ev) {
      if (!f.is_string()) throw Error(Errc::parse_error, "evidence fragments must be strings");
      if (auto t = trim(f.get<std::string>()); !t.empty()) p.fragments.push_back(std::move(t));
    }
  }
  if (p.fragments.empty()) throw Error(Errc::parse_error, "refiner produced no evidence fragment");
  return p;
}

EvidenceItem direct_evidence(const Table& table, CellRef ref, std::string id) {
  EvidenceItem item;
  item.id = std::move(id);
  item.cell = ref;
  item.canonical_text =
      model::canonical_evidence(table.entity(ref.row), table.schema().attribute(ref.col).name, table.at(ref).value);
  item.fragments = {item.canonical_text};
  item.source_tag = table.at(ref).source_tag;
  return item;
}

RefinerProposal refine_and_generate(const Table& table, const model::CapabilityMatrix& matrix, CellRef ref,
                                    llm::AgentRuntime& agents, const std::string& feedback) {
  const auto& label = matrix.at(ref);
  if (!label || label->is_empty()) throw Error(Errc::invalid_argument, "refiner needs a non-EMPTY label");
  const llm::TemplateVars vars = {
      {"markdown_table", "\n" + model::render_markdown(table)},
      {"target_schema", "\n" + model::render_schema(table.schema(), model::SchemaView::full)},
      {"coarse_capability_matrix", "\n" + render_label_grid(table, matrix)},
      {"sub_capability_list", "\n" + model::render_sub_capability_definitions()},
      {"target_cell", cell_name(table, ref) + " = " + table.at(ref).value.value_or("NULL")},
      {"coarse_label", label->to_string()},
      {"canonical_evidence", model::canonical_evidence(table.entity(ref.row),
                                                       table.schema().attribute(ref.col).name, table.at(ref).value)},
      {"feedback", feedback.empty() ? std::string("none") : "\n" + feedback},
  };
  const auto reply = agents.ask("refiner", vars, llm::ResponseFormat::structured_object);
  return parse_refiner_reply(reply.content);
}

VerifierVerdict verify_evidence(const EvidenceItem& item, const Table& table, llm::AgentRuntime& agents) {
  const llm::TemplateVars vars = {
      {"target_cell", cell_name(table, item.cell)},
      {"original_value", table.at(item.cell).value.value_or("NULL")},
      {"sub_capability", item.sub_capability ? CapabilityLabel(*item.sub_capability).to_string() : "EMPTY"},
      {"schema_definition", "\n" + model::render_schema(table.schema(), model::SchemaView::full)},
      {"generated_evidence_text", "\n" + render_fragments(item)},
  };
  const auto reply = agents.ask("refine_verifier", vars, llm::ResponseFormat::structured_object);
  return parse_evidence_verdict(reply.content);
}

EvidenceOutcome evidence_loop(const model::CapabilityMatrix& matrix, const Table& table, llm::AgentRuntime& agents,
                              const LoopConfig& cfg) {
  cfg.validate();
  if (!matrix.matches(table)) throw Error(Errc::dimension_mismatch, "capability matrix does not match the table");
  if (!matrix.complete()) throw Error(Errc::invalid_argument, "capability matrix has unannotated cells");

  EvidenceOutcome out{{}, matrix, {}, {}};
  std::size_t ordinal = 0;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const CellRef ref{r, c};
      if (table.at(ref).is_null()) continue;
      const std::string id = evidence_id(++ordinal);
      const CapabilityLabel label = *matrix.at(ref);
      if (label.is_empty()) {
        out.items.push_back(direct_evidence(table, ref, id));
        continue;
      }

      EvidenceCellTrace trace{ref, id, 0, 0, false, {}};
      EvidenceItem base = direct_evidence(table, ref, id);
      std::optional<EvidenceItem> last_usable;
      std::string feedback;
      for (int attempt = 0; attempt < cfg.evidence_retries && !trace.passed; ++attempt) {
        ++trace.attempts;
        ++trace.calls;
        std::optional<VerifierVerdict> verdict;
        try {
          auto proposal = refine_and_generate(table, matrix, ref, agents, feedback);
          if (model::parent_category(proposal.sub) != label.category()) {
            verdict = VerifierVerdict({{"sub_in_category", false}},
                                      "sub-capability " + std::string(model::to_string(proposal.sub)) +
                                          " does not belong to category " +
                                          std::string(model::to_string(label.category())));
          } else {
            EvidenceItem candidate = base;
            candidate.sub_capability = proposal.sub;
            candidate.fragments = std::move(proposal.fragments);
            last_usable = candidate;
            ++trace.calls;
            verdict = verify_evidence(candidate, table, agents);
          }
        } catch (const Error& e) {
          if (e.code() != Errc::parse_error) throw;
          verdict = VerifierVerdict({{"refiner_output_parseable", false}}, std::string("unusable refiner output: ") + e.what());
        }
        trace.passed = verdict->passed();
        feedback = verdict->feedback_text();
        trace.verdicts.push_back(std::move(*verdict));
      }

      EvidenceItem item = last_usable ? *last_usable : base;
      if (!item.sub_capability) item.sub_capability = label.sub().value_or(first_sub_of(label.category()));
      if (!trace.passed) out.degraded_cells.push_back(ref);
      out.matrix.set(ref, CapabilityLabel(*item.sub_capability));
      out.items.push_back(std::move(item));
      out.traces.push_back(std::move(trace));
    }
  }
  return out;
}

}  // namespace tabdoc::synth
