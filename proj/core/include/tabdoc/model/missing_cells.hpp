#pragma once

#include <cstdint>
#include <vector>

#include "tabdoc/model/table.hpp"

namespace tabdoc::model {

struct MissingCellInjection {
  Table table;
  std::vector<CellRef> removed;  // row-major
};

/// Cells that may be blanked: non-NULL, outside the key column, and outside
/// any column named by a cross constraint or resolution rule (those values
/// could be inferred back from their partner column).
std::vector<CellRef> removal_candidates(const Table& table);

/// NULLs floor(fraction * |candidates|) candidate cells chosen by a seeded
/// Fisher-Yates shuffle (mt19937_64, rejection-sampled bounds), so the
/// choice is reproducible across platforms. The removed cells are meant to
/// be labeled EF/missing_value_faithfulness downstream.
/// Throws invalid_argument when fraction is outside [0, 1) or the table has
/// no candidate cell.
MissingCellInjection inject_missing_cells(const Table& table, double fraction, std::uint64_t seed);

}  // namespace tabdoc::model
