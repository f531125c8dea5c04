#pragma once

#include <cstddef>
#include <vector>

#include "tabdoc/eval/similarity.hpp"
#include "tabdoc/model/table.hpp"

namespace tabdoc::eval {

struct AlignmentConfig {
  double tau = 0.85;
  SimilarityKind similarity = SimilarityKind::normalized_edit;

  /// Throws invalid_argument unless 0 <= tau <= 1.
  void validate() const;
};

struct AlignedPair {
  std::size_t pred_row = 0;
  std::size_t gt_row = 0;
  double score = 0.0;
};

struct Alignment {
  std::vector<AlignedPair> pairs;  // ascending gt_row
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gt;

  double total_score() const noexcept;
};

/// Similarity matrix over normalized key values, indexed [pred][gt]. A NULL
/// predicted key scores 0 against everything.
std::vector<std::vector<double>> key_similarity(const model::Table& pred, const model::Table& gt,
                                                SimilarityKind kind);

/// One-to-one row alignment maximizing total key similarity over pairs whose
/// similarity reaches tau (see max_weight_matching for the tie-break).
/// Throws schema_mismatch when the attribute lists differ.
Alignment align_rows(const model::Table& pred, const model::Table& gt, const AlignmentConfig& cfg);

}  // namespace tabdoc::eval
