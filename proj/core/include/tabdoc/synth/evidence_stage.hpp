#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/model/table.hpp"
#include "tabdoc/synth/loop_config.hpp"
#include "tabdoc/synth/verdict.hpp"

namespace tabdoc::synth {

/// What the Refiner proposed for one cell.
struct RefinerProposal {
  model::SubCapability sub;
  std::vector<std::string> fragments;  // trimmed, nonempty
};

/// Parses {"sub_capability": "...", "evidence": ["...", ...]}. Throws
/// parse_error for missing keys, an unknown sub-capability, or no nonempty
/// fragment.
RefinerProposal parse_refiner_reply(std::string_view reply);

/// Single-fragment evidence holding the canonical sentence. Used for EMPTY
/// cells, which bypass the Refiner.
model::EvidenceItem direct_evidence(const model::Table& table, model::CellRef ref, std::string id);

/// One Refiner call for a labeled cell. `feedback` is the previous verdict's
/// feedback, or empty on the first attempt.
RefinerProposal refine_and_generate(const model::Table& table, const model::CapabilityMatrix& matrix,
                                    model::CellRef ref, llm::AgentRuntime& agents, const std::string& feedback);

/// One Refine_Verifier call.
VerifierVerdict verify_evidence(const model::EvidenceItem& item, const model::Table& table,
                                llm::AgentRuntime& agents);

struct EvidenceCellTrace {
  model::CellRef cell;
  std::string evidence_id;
  int attempts = 0;  // refine rounds
  int calls = 0;     // backend calls (refiner + verifier)
  bool passed = false;
  std::vector<VerifierVerdict> verdicts;
};

struct EvidenceOutcome {
  std::vector<model::EvidenceItem> items;  // ordered by id
  model::CapabilityMatrix matrix;          // refined
  std::vector<EvidenceCellTrace> traces;   // one per refined cell
  std::vector<model::CellRef> degraded_cells;
};

/// Evidence ids e1..eN assigned row-major over non-NULL cells.
std::string evidence_id(std::size_t ordinal);

/// Step 2 over the whole table. EMPTY cells get direct evidence, NULL cells
/// none. Every other cell loops refine -> verify, feeding the verdict back,
/// for at most cfg.evidence_retries rounds. A reply the code cannot use (bad
/// JSON, sub outside the annotated category) counts as a FAIL without a
/// verifier call. A cell that never passes keeps its last usable proposal,
/// or its canonical sentence and the category's first sub when there was
/// none, and is listed in degraded_cells.
EvidenceOutcome evidence_loop(const model::CapabilityMatrix& matrix, const model::Table& table,
                              llm::AgentRuntime& agents, const LoopConfig& cfg);

}  // namespace tabdoc::synth
