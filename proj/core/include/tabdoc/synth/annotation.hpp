#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/table.hpp"
#include "tabdoc/synth/loop_config.hpp"

namespace tabdoc::synth {

/// Matrix with every NULL cell pre-labeled EF/missing_value_faithfulness and
/// all other positions unannotated.
model::CapabilityMatrix seed_matrix(const model::Table& table);

/// Reads an Annotator reply: {"assignments": {entity: {attribute: [label]}}}.
/// Only positions in `pending` are filled. Entities and attributes are matched
/// by exact name, then by loose name. Unknown labels, entities, or attributes
/// leave the position unannotated; the label is checked structurally only.
/// Throws annotation_parse_error when the reply holds no assignments object.
model::CapabilityMatrix parse_annotation(std::string_view reply, const model::Table& table,
                                         const std::vector<model::CellRef>& pending);

/// One Annotator call for the `pending` cells.
model::CapabilityMatrix annotate_capabilities(const model::Table& table, llm::AgentRuntime& agents,
                                              const std::vector<model::CellRef>& pending);

/// The code-based checker: unannotated positions, row-major.
std::vector<model::CellRef> check_annotation_completeness(const model::CapabilityMatrix& matrix);

struct AnnotationOutcome {
  model::CapabilityMatrix matrix;  // complete
  int rounds = 0;                  // annotator calls made
  std::vector<model::CellRef> fallback_cells;  // holes set to EMPTY after the last round
  std::vector<std::string> problems;           // parse errors per round
};

/// Annotate, check, and re-prompt for the holes, up to cfg.annotation_rounds
/// calls; holes left after that become EMPTY.
AnnotationOutcome annotation_loop(const model::Table& table, llm::AgentRuntime& agents, const LoopConfig& cfg);

}  // namespace tabdoc::synth
