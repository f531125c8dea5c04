#include "tabdoc/eval/assignment.hpp"

#include "tabdoc/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace tabdoc::eval {

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost[0].size();
  if (m < n) throw Error(Errc::invalid_argument, "solve_assignment: more rows than columns");
  for (const auto& row : cost)
    if (row.size() != m) throw Error(Errc::invalid_argument, "solve_assignment: ragged cost matrix");

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

namespace {

constexpr double kTol = 1e-9;

struct SubSolution {
  double total = 0.0;
  std::map<std::size_t, std::size_t> right_to_left;  // real edges only
};

// Max-weight matching restricted to the given left and right items.
SubSolution solve_sub(const std::vector<std::vector<double>>& w, const std::vector<std::size_t>& left,
                      const std::vector<std::size_t>& right) {
  SubSolution out;
  const std::size_t n = std::max(left.size(), right.size());
  if (left.empty() || right.empty()) return out;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < left.size(); ++a)
    for (std::size_t b = 0; b < right.size(); ++b) cost[a][b] = -w[left[a]][right[b]];
  const auto assign = solve_assignment(cost);
  for (std::size_t a = 0; a < left.size(); ++a) {
    const std::size_t b = assign[a];
    if (b >= right.size()) continue;
    const double weight = w[left[a]][right[b]];
    if (weight <= 0.0) continue;
    out.total += weight;
    out.right_to_left[right[b]] = left[a];
  }
  return out;
}

}  // namespace

Matching max_weight_matching(const std::vector<std::vector<double>>& weights, double tau) {
  Matching result;
  const std::size_t nl = weights.size();
  if (nl == 0) return result;
  const std::size_t nr = weights[0].size();
  std::vector<std::vector<double>> w(nl, std::vector<double>(nr, 0.0));
  for (std::size_t l = 0; l < nl; ++l) {
    if (weights[l].size() != nr) throw Error(Errc::invalid_argument, "max_weight_matching: ragged weight matrix");
    for (std::size_t r = 0; r < nr; ++r) {
      const double x = weights[l][r];
      w[l][r] = (x >= tau && x > 0.0) ? x : 0.0;
    }
  }

  std::vector<std::size_t> free_left(nl), free_right(nr);
  for (std::size_t l = 0; l < nl; ++l) free_left[l] = l;
  for (std::size_t r = 0; r < nr; ++r) free_right[r] = r;

  SubSolution current = solve_sub(w, free_left, free_right);
  const double best = current.total;
  double fixed = 0.0;

  for (std::size_t r = 0; r < nr; ++r) {
    free_right.erase(std::find(free_right.begin(), free_right.end(), r));
    const auto it = current.right_to_left.find(r);
    const std::size_t limit = it == current.right_to_left.end() ? nl : it->second;
    bool matched = false;
    for (std::size_t l : free_left) {
      if (l >= limit) break;
      if (w[l][r] <= 0.0) continue;
      std::vector<std::size_t> rest_left;
      rest_left.reserve(free_left.size());
      for (std::size_t x : free_left)
        if (x != l) rest_left.push_back(x);
      SubSolution sub = solve_sub(w, rest_left, free_right);
      if (fixed + w[l][r] + sub.total >= best - kTol) {
        result.pairs.emplace_back(l, r);
        fixed += w[l][r];
        free_left = std::move(rest_left);
        current = std::move(sub);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (limit < nl) {
      // The current optimum already pairs r with `limit`.
      result.pairs.emplace_back(limit, r);
      fixed += w[limit][r];
      free_left.erase(std::find(free_left.begin(), free_left.end(), limit));
      current.total -= w[limit][r];
      current.right_to_left.erase(r);
    }
  }
  result.total = fixed;
  return result;
}

}  // namespace tabdoc::eval
