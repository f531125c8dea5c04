#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabdoc/model/schema.hpp"

namespace tabdoc::model {

/// (row, column) position inside a table, zero-based.
struct CellRef {
  std::size_t row = 0;
  std::size_t col = 0;

  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

struct Cell {
  std::optional<std::string> value;  // nullopt is NULL
  std::optional<std::string> source_tag;

  bool is_null() const noexcept { return !value.has_value(); }
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Tuple {
  std::vector<Cell> cells;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

/// Rows of cells aligned to a schema. Every tuple has exactly one cell per
/// attribute; construction enforces that much. Ground-truth tables are held
/// to more (see `check_ground_truth`), predictions are not.
class Table {
 public:
  Table(std::shared_ptr<const Schema> schema, std::vector<Tuple> tuples);

  /// Builds a table and enforces the ground-truth invariants.
  static Table ground_truth(std::shared_ptr<const Schema> schema, std::vector<Tuple> tuples);

  const Schema& schema() const noexcept { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const noexcept { return schema_; }
  const std::vector<Tuple>& tuples() const noexcept { return tuples_; }
  std::size_t rows() const noexcept { return tuples_.size(); }
  std::size_t cols() const noexcept { return schema_->attribute_count(); }

  const Cell& at(std::size_t row, std::size_t col) const { return tuples_.at(row).cells.at(col); }
  const Cell& at(CellRef ref) const { return at(ref.row, ref.col); }

  /// Key-attribute value of a row, or empty for a NULL key.
  std::string entity(std::size_t row) const;

  /// Throws invalid_argument unless: at least one tuple, key cells non-NULL
  /// and pairwise distinct.
  void check_ground_truth() const;

  /// Structural equality: same attribute names in the same order and equal tuples.
  friend bool operator==(const Table& a, const Table& b);

 private:
  std::shared_ptr<const Schema> schema_;
  std::vector<Tuple> tuples_;
};

/// GitHub-style pipe table. NULL renders as `NULL`; `|` and `\` are
/// backslash-escaped and newlines become `<br>`.
std::string render_markdown(const Table& table);

/// {"columns": [...], "rows": [[cell, ...], ...]}; a cell is a string, null,
/// or {"value": string|null, "source": string}.
nlohmann::json to_json(const Table& table);
/// Columns are mapped to the schema by name and may come in any order; every
/// schema attribute must be present.
Table table_from_json(const nlohmann::json& j, std::shared_ptr<const Schema> schema);

/// RFC 4180 CSV with a header row of attribute names. Unquoted empty fields
/// and unquoted `NULL` read as NULL.
Table table_from_csv(std::string_view text, std::shared_ptr<const Schema> schema);

struct CsvField {
  std::string text;
  bool quoted = false;
};
std::vector<std::vector<CsvField>> parse_csv_records(std::string_view text);

/// Loads a ground-truth table from .csv or .json (by extension).
Table load_table(const std::filesystem::path& path, std::shared_ptr<const Schema> schema);

}  // namespace tabdoc::model
