#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace tabdoc::eval {

/// Minimum-cost perfect assignment on an n x m cost matrix with n <= m
/// (Hungarian algorithm with potentials, O(n^2 m)). Returns the column
/// assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (left, right), sorted by (right, left)
  double total = 0.0;
};

/// Maximum-weight one-to-one matching between left (rows of `weights`) and
/// right (columns) items, using only edges with weight >= tau and > 0.
/// The problem is solved on a square matrix padded with zero-weight dummies.
/// Among optimal matchings the lexicographically smallest pair list, ordered
/// by (right, left), is returned: right items are fixed in ascending order,
/// each to the smallest left item that still admits an optimum (checked by
/// re-solving the reduced problem, totals compared to 1e-9).
Matching max_weight_matching(const std::vector<std::vector<double>>& weights, double tau);

}  // namespace tabdoc::eval
