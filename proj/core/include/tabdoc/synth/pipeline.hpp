#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/llm/agent_runtime.hpp"
#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/evidence.hpp"
#include "tabdoc/model/table.hpp"
#include "tabdoc/synth/judge.hpp"
#include "tabdoc/synth/loop_config.hpp"

namespace tabdoc::synth {

inline constexpr const char* kWorkDir = "work";
inline constexpr const char* kCheckpointFile = "checkpoint.json";
inline constexpr const char* kReportFile = "synthesis_report.json";

struct SynthesisOptions {
  LoopConfig loops;
  bool allow_degraded = false;
  bool judge = false;
  bool resume = true;
  /// Fusion shortcut: externally supplied evidence enters at planning, and
  /// annotation and refinement are skipped.
  std::optional<std::vector<model::EvidenceItem>> fusion_evidence;
  /// Receives {"event": ..., ...} records (stage start/finish, timings).
  std::function<void(const nlohmann::json&)> on_event;
};

struct SynthesisResult {
  model::CapabilityMatrix matrix;
  std::vector<model::EvidenceItem> evidence;
  model::WritingPlan plan;
  model::SynthDocument document;
  std::optional<QualityScores> quality;
  nlohmann::json provenance;

  bool degraded = false;
  std::vector<std::string> degradation;  // human-readable reasons
  std::vector<model::CellRef> degraded_cells;
  std::vector<std::size_t> degraded_sections;
  std::vector<std::string> missing_fragment_ids;
  int annotation_rounds = 0;
  std::vector<model::CellRef> annotation_fallback;
  std::vector<std::string> resumed_stages;
  bool bundle_written = false;
  nlohmann::json traces;  // per-stage loop traces
};

/// Fusion entry: checks the supplied pool against the table and completes
/// it. Every uncovered non-NULL cell gets its canonical sentence under a
/// fresh id; labels come from the items' sub-capabilities (EMPTY when none),
/// and NULL cells are EF/missing_value_faithfulness. Throws invalid_argument
/// for evidence on a NULL cell.
std::pair<model::CapabilityMatrix, std::vector<model::EvidenceItem>> fusion_pool(
    const model::Table& table, std::vector<model::EvidenceItem> supplied);

/// Runs the five steps for one case and writes the bundle into `out_dir`.
/// Stage artifacts and a checkpoint (last completed stage plus artifact
/// digests) go to `out_dir/work`; a rerun with identical inputs resumes after
/// the last intact stage. A degraded case (a cell or section out of retries,
/// or a fragment missing from the assembled document) is only written as a
/// bundle with allow_degraded; otherwise any stale bundle files are removed.
/// Backend errors propagate and leave the checkpoint for resumption.
SynthesisResult run_synthesis(const model::Table& table, llm::AgentRuntime& agents,
                              const SynthesisOptions& options, const std::filesystem::path& out_dir);

}  // namespace tabdoc::synth
