#include "tabdoc/model/missing_cells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "tabdoc/error.hpp"

namespace tabdoc::model {
namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  // Uniform in [0, bound) without modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::vector<CellRef> removal_candidates(const Table& table) {
  const auto& schema = table.schema();
  const auto constrained = schema.constrained_columns();
  const std::set<std::size_t> excluded(constrained.begin(), constrained.end());
  std::vector<CellRef> out;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (c == schema.key_attribute_index() || excluded.count(c)) continue;
      if (table.at(r, c).is_null()) continue;
      out.push_back({r, c});
    }
  }
  return out;
}

MissingCellInjection inject_missing_cells(const Table& table, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(Errc::invalid_argument, "missing-cell fraction must lie in [0, 1)");
  }
  auto candidates = removal_candidates(table);
  if (candidates.empty()) {
    throw Error(Errc::invalid_argument, "table has no cell eligible for removal");
  }
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(candidates.size())));

  std::mt19937_64 rng(seed);
  for (std::size_t i = candidates.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i + 1));
    std::swap(candidates[i], candidates[j]);
  }
  std::vector<CellRef> removed(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(removed.begin(), removed.end());

  std::vector<Tuple> tuples = table.tuples();
  for (const auto& ref : removed) tuples[ref.row].cells[ref.col].value.reset();
  return {Table(table.schema_ptr(), std::move(tuples)), std::move(removed)};
}

}  // namespace tabdoc::model
