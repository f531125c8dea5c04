#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/model/table.hpp"
#include "tabdoc/model/taxonomy.hpp"

namespace tabdoc::model {

/// n x m grid of capability labels aligned to a table. A position with no
/// label is a hole (unannotated); holes only exist while annotation runs.
class CapabilityMatrix {
 public:
  CapabilityMatrix() = default;
  CapabilityMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const std::optional<CapabilityLabel>& at(std::size_t row, std::size_t col) const;
  const std::optional<CapabilityLabel>& at(CellRef ref) const { return at(ref.row, ref.col); }
  void set(CellRef ref, CapabilityLabel label);
  void clear(CellRef ref);

  /// Positions without a label, row-major.
  std::vector<CellRef> holes() const;
  bool complete() const { return holes().empty(); }
  /// Complete and every label is EMPTY or carries a sub-capability.
  bool refined() const;

  bool matches(const Table& table) const noexcept {
    return rows_ == table.rows() && cols_ == table.cols();
  }

  friend bool operator==(const CapabilityMatrix&, const CapabilityMatrix&) = default;

 private:
  std::size_t index(std::size_t row, std::size_t col) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::optional<CapabilityLabel>> labels_;
};

/// {"rows": n, "cols": m, "labels": [["EMPTY", "TA/unit_transformation", null, ...], ...]}
nlohmann::json to_json(const CapabilityMatrix& matrix);
CapabilityMatrix capability_matrix_from_json(const nlohmann::json& j);

}  // namespace tabdoc::model
