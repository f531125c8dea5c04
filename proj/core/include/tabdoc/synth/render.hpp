#pragma once

#include <string>
#include <vector>

#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/model/table.hpp"

// Prompt fragments shared by the synthesis agents.
namespace tabdoc::synth {

/// "Patient-07 / Discharge_Date"
std::string cell_name(const model::Table& table, model::CellRef ref);

/// Markdown grid of labels with the same header and key column as the table.
/// Holes render as "?".
std::string render_label_grid(const model::Table& table, const model::CapabilityMatrix& matrix);

/// "- [e3] fragment | fragment" per item.
std::string render_evidence_with_ids(const std::vector<model::EvidenceItem>& items);

/// Numbered fragment lines, one per fragment.
std::string render_fragments(const model::EvidenceItem& item);

}  // namespace tabdoc::synth
