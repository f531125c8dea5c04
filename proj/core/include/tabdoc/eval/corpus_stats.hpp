#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/model/capability_matrix.hpp"

namespace tabdoc::eval {

/// Shape of one benchmark case.
struct CaseShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t tokens = 0;  // document length in whitespace tokens
  std::optional<model::CapabilityMatrix> matrix;
};

struct Range {
  std::size_t min = 0;
  std::size_t max = 0;
  double avg = 0.0;
};

struct CorpusStats {
  std::size_t cases = 0;
  Range rows;
  Range cols;
  Range tokens;
  std::size_t labeled_cells = 0;
  /// Label counts over all labeled cells; EMPTY is its own category.
  std::map<model::Category, std::size_t> category_counts;
  std::map<model::SubCapability, std::size_t> sub_counts;

  /// 100 * count / labeled_cells, unrounded; 0 when nothing is labeled.
  double category_share(model::Category c) const;
  double sub_share(model::SubCapability s) const;
};

/// Throws invalid_argument for an empty corpus.
CorpusStats corpus_stats(const std::vector<CaseShape>& cases);

/// {"cases", "rows": {"min", "max", "avg"}, "cols", "tokens", "labeled_cells",
///  "categories": {"TA": {"count", "share"}}, "sub_capabilities": {...}}
nlohmann::json to_json(const CorpusStats& s);

/// Rows / Columns / Tokens by Min / Max / Avg (average with one decimal).
std::string corpus_stats_markdown(const CorpusStats& s);

}  // namespace tabdoc::eval
