#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/eval/alignment.hpp"
#include "tabdoc/model/capability_matrix.hpp"
#include "tabdoc/model/table.hpp"
#include "tabdoc/model/taxonomy.hpp"

namespace tabdoc::eval {

struct BucketCount {
  std::size_t matched = 0;
  std::size_t total = 0;

  BucketCount& operator+=(const BucketCount& o) noexcept {
    matched += o.matched;
    total += o.total;
    return *this;
  }
  friend bool operator==(const BucketCount&, const BucketCount&) = default;
};

/// Additive cell counts; metrics are micro-averaged by summing these first.
struct ScoreCounts {
  std::size_t tp = 0;
  std::size_t pred_cells = 0;
  std::size_t gt_cells = 0;
  BucketCount direct;    // EMPTY-labeled ground-truth cells
  BucketCount indirect;  // every other label
  std::map<model::Category, BucketCount> by_category;
  std::map<model::SubCapability, BucketCount> by_sub;

  ScoreCounts& operator+=(const ScoreCounts& o);
  friend bool operator==(const ScoreCounts&, const ScoreCounts&) = default;
};

/// {"tp", "pred_cells", "gt_cells", "direct": {"matched", "total"}, "indirect": {...},
///  "by_category": {"TA": {...}}, "by_sub": {"unit_transformation": {...}}}
nlohmann::json to_json(const ScoreCounts& c);
ScoreCounts score_counts_from_json(const nlohmann::json& j);

/// Outcome for one ground-truth cell.
struct CellVerdict {
  model::CellRef gt;
  std::optional<std::size_t> pred_row;  // nullopt when the gt row is unmatched
  bool match = false;
  std::string gt_value;    // normalized
  std::string pred_value;  // normalized; empty when unmatched
  model::CapabilityLabel label;
};

struct CaseScore {
  ScoreCounts counts;
  std::vector<CellVerdict> verdicts;  // row-major over ground-truth cells
};

/// Cell-level scoring over an alignment. A cell matches when both normalized
/// values are equal (NULL against NULL included). Cells of unmatched gt rows
/// are misses; cells of unmatched pred rows only enlarge pred_cells.
/// Throws dimension_mismatch when the matrix does not fit `gt` and
/// invalid_argument when it is not refined.
CaseScore score_cells(const Alignment& alignment, const model::Table& pred, const model::Table& gt,
                      const model::CapabilityMatrix& matrix);

nlohmann::json to_json(const CellVerdict& v, const model::Table& gt);

}  // namespace tabdoc::eval
