#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/model/table.hpp"
#include "tabdoc/synth/loop_config.hpp"
#include "tabdoc/synth/verdict.hpp"

namespace tabdoc::synth {

/// Marker rendered as the previous-section summary of section 1.
inline constexpr std::string_view kNoPreviousSection = "none (this is the first section)";

/// Evidence items assigned to `section`, in assignment order.
std::vector<model::EvidenceItem> section_evidence(const model::PlanSection& section,
                                                  const std::vector<model::EvidenceItem>& pool);

/// One Writer call. Throws writer_empty_output for a blank reply.
std::string write_section(const model::PlanSection& section, const model::WritingPlan& plan,
                          const model::Schema& schema, const std::vector<model::EvidenceItem>& evidence,
                          llm::AgentRuntime& agents, const std::string& feedback = {});

/// One Section Verifier call.
VerifierVerdict verify_section(const std::string& body, const model::PlanSection& section,
                               const std::vector<model::EvidenceItem>& evidence, const model::Table& table,
                               llm::AgentRuntime& agents);

struct SectionTrace {
  std::size_t index = 0;
  int attempts = 0;
  int calls = 0;
  bool passed = false;
  std::vector<VerifierVerdict> verdicts;
};

struct WritingOutcome {
  std::vector<model::DocumentSection> sections;  // plan order
  std::vector<SectionTrace> traces;
  std::vector<std::size_t> degraded_sections;  // 1-based indices
};

/// Write -> verify per section, rewriting with the verifier's errors, at most
/// cfg.section_retries rounds. A blank draft counts as a failed round without
/// a verifier call. A section that never passes keeps its last draft and is
/// listed as degraded; one with no draft at all raises writer_empty_output.
WritingOutcome writing_loop(const model::WritingPlan& plan, const std::vector<model::EvidenceItem>& evidence,
                            const model::Table& table, llm::AgentRuntime& agents, const LoopConfig& cfg);

/// Joins "# {title}\n{body}" blocks with blank lines and counts tokens.
/// Throws assembly_incomplete for no sections or a blank title/body.
model::SynthDocument assemble_document(const std::vector<model::DocumentSection>& sections);

/// {"document_type", "evidence": {id: {"cell": [r, c], "sub_capability",
/// "sections": [k...], "fragments": n}}}
nlohmann::json build_provenance(const model::WritingPlan& plan, const std::vector<model::EvidenceItem>& evidence);

/// Ids of evidence items with a fragment that is not a substring of the
/// document. Both sides are whitespace-collapsed first.
std::vector<std::string> missing_fragments(std::string_view document,
                                           const std::vector<model::EvidenceItem>& evidence);

}  // namespace tabdoc::synth
