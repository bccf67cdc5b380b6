#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "portmatch/matrix.hpp"

namespace portmatch {

template <typename T>
struct Assignment {
  std::vector<std::size_t> row_to_col;
  T total{};
};

namespace detail {

template <typename T>
constexpr T infinity() {
  if constexpr (std::is_floating_point_v<T>)
    return std::numeric_limits<T>::infinity();
  else
    return std::numeric_limits<T>::max() / 4;
}

}  // namespace detail

/// Maximum-weight perfect assignment on a square matrix.
///
/// Shortest augmenting path Hungarian method with row/column potentials,
/// O(n^3). Among optimal assignments the result is the lexicographically
/// smallest row_to_col vector: optimal assignments are exactly the perfect
/// matchings of the tight subgraph under the final potentials, and each row in
/// turn is moved to the smallest column reachable by an alternating cycle in
/// that subgraph. An entry is tight when its reduced cost is within
/// `tie_tolerance` (zero for integer weights).
template <typename T>
Assignment<T> solve_max_assignment(const Matrix<T>& weights, T tie_tolerance = T{}) {
  if (weights.rows() != weights.cols())
    throw std::invalid_argument("solve_max_assignment: matrix must be square");
  const std::size_t n = weights.rows();
  Assignment<T> result;
  result.row_to_col.assign(n, 0);
  if (n == 0) return result;

  const T inf = detail::infinity<T>();
  // Minimise cost = -weight. Arrays are 1-based; index 0 is the virtual root.
  auto cost = [&](std::size_t i, std::size_t j) { return -weights(i - 1, j - 1); };
  std::vector<T> u(n + 1, T{}), v(n + 1, T{});
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<T> minv(n + 1);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = col_owner[j0];
      T delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const T cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n), col_to_row(n);
  for (std::size_t j = 1; j <= n; ++j) {
    row_to_col[col_owner[j] - 1] = j - 1;
    col_to_row[j - 1] = col_owner[j] - 1;
  }
  auto tight = [&](std::size_t r, std::size_t c) {
    return cost(r + 1, c + 1) - u[r + 1] - v[c + 1] <= tie_tolerance;
  };

  // Lexicographic tie-break over the tight subgraph.
  std::vector<char> col_fixed(n, 0);
  std::vector<std::size_t> parent_col(n);
  std::vector<char> seen(n);
  std::vector<std::size_t> queue;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t target = row_to_col[r];
    for (std::size_t c = 0; c < target; ++c) {
      if (col_fixed[c] || !tight(r, c)) continue;
      // Row k = owner of c must reach column `target` via rows other than r.
      std::fill(seen.begin(), seen.end(), 0);
      queue.assign(1, col_to_row[c]);
      seen[c] = 1;
      std::size_t found = n;
      for (std::size_t h = 0; h < queue.size() && found == n; ++h) {
        const std::size_t x = queue[h];
        for (std::size_t y = 0; y < n; ++y) {
          if (col_fixed[y] || seen[y] || y == row_to_col[x] || !tight(x, y)) continue;
          seen[y] = 1;
          parent_col[y] = row_to_col[x];
          if (y == target) {
            found = y;
            break;
          }
          queue.push_back(col_to_row[y]);
        }
      }
      if (found == n) continue;
      // Rotate: walking back from target, each row moves to the column it reached.
      std::size_t y = target;
      while (true) {
        const std::size_t from = parent_col[y];  // column currently held by the mover
        const std::size_t mover = col_to_row[from];
        row_to_col[mover] = y;
        col_to_row[y] = mover;
        if (from == c) break;
        y = from;
      }
      row_to_col[r] = c;
      col_to_row[c] = r;
      break;
    }
    col_fixed[row_to_col[r]] = 1;
  }

  result.row_to_col = row_to_col;
  for (std::size_t r = 0; r < n; ++r) result.total += weights(r, row_to_col[r]);
  return result;
}

}  // namespace portmatch
