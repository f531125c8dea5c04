#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/eval/alignment.hpp"
#include "tabdoc/eval/metrics.hpp"
#include "tabdoc/eval/scoring.hpp"

namespace tabdoc::eval {

/// Per-case evaluation result as written by `tabdoc eval`.
struct CaseReport {
  std::string case_id;
  std::string model;
  AlignmentConfig alignment_config;
  Alignment alignment;
  CaseScore score;
};

/// {"case", "model", "alignment": {"tau", "similarity", "pairs", "unmatched_pred",
///  "unmatched_gt"}, "counts", "metrics", "cells"}
nlohmann::json to_json(const CaseReport& r, const model::Table& gt);

/// The fields `report` needs back: case id, model and counts.
struct CaseRecord {
  std::string case_id;
  std::string model;
  ScoreCounts counts;
};
CaseRecord case_record_from_json(const nlohmann::json& j);

struct ModelSummary {
  std::string model;
  std::size_t cases = 0;
  ScoreCounts counts;
  MetricReport metrics;
};

/// Groups records by model (sorted by name) and micro-averages each group.
std::vector<ModelSummary> summarize(const std::vector<CaseRecord>& records);

/// {"models": [{"model", "cases", "counts", "metrics"}]}
nlohmann::json summary_json(const std::vector<ModelSummary>& summaries);

/// Two markdown tables: overall metrics (P, R, F1, R_dir, R_ind, delta) and
/// per-capability success rates. Absent values print as "-".
std::string summary_markdown(const std::vector<ModelSummary>& summaries);

}  // namespace tabdoc::eval
