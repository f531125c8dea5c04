#include "tabdoc/model/capability_matrix.hpp"

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"

namespace tabdoc::model {

CapabilityMatrix::CapabilityMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), labels_(rows * cols) {}

std::size_t CapabilityMatrix::index(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) {
    throw Error(Errc::dimension_mismatch, "cell (" + std::to_string(row) + "," +
                                              std::to_string(col) + ") outside " +
                                              std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return row * cols_ + col;
}

const std::optional<CapabilityLabel>& CapabilityMatrix::at(std::size_t row, std::size_t col) const {
  return labels_[index(row, col)];
}

void CapabilityMatrix::set(CellRef ref, CapabilityLabel label) { labels_[index(ref.row, ref.col)] = label; }

void CapabilityMatrix::clear(CellRef ref) { labels_[index(ref.row, ref.col)].reset(); }

std::vector<CellRef> CapabilityMatrix::holes() const {
  std::vector<CellRef> out;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!labels_[r * cols_ + c]) out.push_back({r, c});
    }
  }
  return out;
}

bool CapabilityMatrix::refined() const {
  for (const auto& l : labels_) {
    if (!l || !l->is_refined()) return false;
  }
  return true;
}

nlohmann::json to_json(const CapabilityMatrix& matrix) {
  nlohmann::json labels = nlohmann::json::array();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      const auto& l = matrix.at(r, c);
      row.push_back(l ? nlohmann::json(l->to_string()) : nlohmann::json(nullptr));
    }
    labels.push_back(std::move(row));
  }
  return {{"rows", matrix.rows()}, {"cols", matrix.cols()}, {"labels", std::move(labels)}};
}

CapabilityMatrix capability_matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& labels = j.at("labels");
    if (labels.size() != rows) throw Error(Errc::parse_error, "capability matrix row count mismatch");
    CapabilityMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (labels[r].size() != cols) {
        throw Error(Errc::parse_error, "capability matrix column count mismatch in row " +
                                           std::to_string(r));
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (labels[r][c].is_null()) continue;
        m.set({r, c}, CapabilityLabel::parse(labels[r][c].get<std::string>()));
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed capability matrix: ") + e.what());
  }
}

}  // namespace tabdoc::model
