#include "tabdoc/synth/writing.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/model/normalize.hpp"
#include "tabdoc/model/schema.hpp"
#include "tabdoc/synth/render.hpp"

namespace tabdoc::synth {

using model::EvidenceItem;
using nlohmann::json;

namespace {

std::string render_section_evidence(const std::vector<EvidenceItem>& items) {
  std::string out;
  for (const auto& item : items) {
    for (const auto& f : item.fragments) out += "- [" + item.id + "] " + f + "\n";
  }
  return out;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<EvidenceItem> section_evidence(const model::PlanSection& section, const std::vector<EvidenceItem>& pool) {
  std::map<std::string, const EvidenceItem*> by_id;
  for (const auto& item : pool) by_id.emplace(item.id, &item);
  std::vector<EvidenceItem> out;
  for (const auto& id : section.evidence_ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(Errc::unknown_evidence_id, "section cites unknown evidence '" + id + "'");
    out.push_back(*it->second);
  }
  return out;
}

std::string write_section(const model::PlanSection& section, const model::WritingPlan& plan,
                          const model::Schema& schema, const std::vector<EvidenceItem>& evidence,
                          llm::AgentRuntime& agents, const std::string& feedback) {
  std::string previous(kNoPreviousSection);
  for (std::size_t k = 0; k < plan.sections.size(); ++k) {
    if (plan.sections[k].index == section.index && k > 0) previous = plan.sections[k - 1].summary;
  }
  const llm::TemplateVars vars = {
      {"section_index", std::to_string(section.index)},
      {"section_title", section.title},
      {"schema_definition", "\n" + model::render_schema(schema, model::SchemaView::full)},
      {"previous_summary", previous},
      {"current_summary", section.summary},
      {"list_of_evidences", render_section_evidence(evidence)},
      {"feedback", feedback.empty() ? std::string{} : "- Reviewer feedback on the previous draft:\n" + feedback + "\n"},
  };
  const auto reply = agents.ask("writer", vars);
  if (blank(reply.content)) {
    throw Error(Errc::writer_empty_output, "writer returned no text for section " + std::to_string(section.index));
  }
  return trim(reply.content);
}

VerifierVerdict verify_section(const std::string& body, const model::PlanSection& section,
                               const std::vector<EvidenceItem>& evidence, const model::Table& table,
                               llm::AgentRuntime& agents) {
  const llm::TemplateVars vars = {
      {"section_title", section.title},
      {"section_content", "\n" + body + "\n"},
      {"list_of_evidences", "\n" + render_section_evidence(evidence)},
      {"markdown_table_and_schema", "\n" + model::render_markdown(table) + "\n" +
                                        model::render_schema(table.schema(), model::SchemaView::full)},
  };
  const auto reply = agents.ask("section_verifier", vars, llm::ResponseFormat::structured_object);
  return parse_section_verdict(reply.content);
}

WritingOutcome writing_loop(const model::WritingPlan& plan, const std::vector<EvidenceItem>& evidence,
                            const model::Table& table, llm::AgentRuntime& agents, const LoopConfig& cfg) {
  cfg.validate();
  WritingOutcome out;
  for (const auto& section : plan.sections) {
    const auto items = section_evidence(section, evidence);
    SectionTrace trace{section.index, 0, 0, false, {}};
    std::string draft;
    std::string feedback;
    for (int attempt = 0; attempt < cfg.section_retries && !trace.passed; ++attempt) {
      ++trace.attempts;
      ++trace.calls;
      std::optional<VerifierVerdict> verdict;
      try {
        draft = write_section(section, plan, table.schema(), items, agents, feedback);
        ++trace.calls;
        verdict = verify_section(draft, section, items, table, agents);
      } catch (const Error& e) {
        if (e.code() != Errc::writer_empty_output) throw;
        verdict = VerifierVerdict({{"nonempty_output", false}}, "the previous draft was empty");
      }
      trace.passed = verdict->passed();
      feedback = verdict->feedback_text();
      trace.verdicts.push_back(std::move(*verdict));
    }
    if (draft.empty()) {
      throw Error(Errc::writer_empty_output, "section " + std::to_string(section.index) + " never got a draft");
    }
    if (!trace.passed) out.degraded_sections.push_back(section.index);
    out.sections.push_back({section.title, std::move(draft)});
    out.traces.push_back(std::move(trace));
  }
  return out;
}

model::SynthDocument assemble_document(const std::vector<model::DocumentSection>& sections) {
  if (sections.empty()) throw Error(Errc::assembly_incomplete, "no sections to assemble");
  model::SynthDocument doc;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const auto& s = sections[k];
    if (blank(s.title) || blank(s.body)) {
      throw Error(Errc::assembly_incomplete, "section " + std::to_string(k + 1) + " is missing its title or body");
    }
    if (k) doc.assembled_text += "\n\n";
    doc.assembled_text += "# " + s.title + "\n" + s.body;
  }
  doc.assembled_text += "\n";
  doc.sections = sections;
  doc.token_count = model::count_tokens(doc.assembled_text);
  return doc;
}

json build_provenance(const model::WritingPlan& plan, const std::vector<EvidenceItem>& evidence) {
  std::map<std::string, std::vector<std::size_t>> sections_of;
  for (const auto& s : plan.sections) {
    for (const auto& id : s.evidence_ids) {
      auto& v = sections_of[id];
      if (v.empty() || v.back() != s.index) v.push_back(s.index);
    }
  }
  json items = json::object();
  for (const auto& item : evidence) {
    json entry = {{"cell", {item.cell.row, item.cell.col}},
                  {"sections", sections_of.count(item.id) ? json(sections_of[item.id]) : json::array()},
                  {"fragments", item.fragments.size()}};
    entry["sub_capability"] = item.sub_capability ? json(model::to_string(*item.sub_capability)) : json(nullptr);
    items[item.id] = std::move(entry);
  }
  return {{"document_type", plan.document_type}, {"evidence", std::move(items)}};
}

std::vector<std::string> missing_fragments(std::string_view document, const std::vector<EvidenceItem>& evidence) {
  const std::string doc = model::collapse_whitespace(document);
  std::vector<std::string> out;
  for (const auto& item : evidence) {
    for (const auto& f : item.fragments) {
      if (doc.find(model::collapse_whitespace(f)) == std::string::npos) {
        out.push_back(item.id);
        break;
      }
    }
  }
  return out;
}

}  // namespace tabdoc::synth
