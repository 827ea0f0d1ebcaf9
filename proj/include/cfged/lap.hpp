#pragma once

// Dense linear assignment in O(n^3): Jonker-Volgenant style shortest
// augmenting paths with row/column dual potentials.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cfged/error.hpp"

namespace cfged {

// Sentinel for forbidden cells. Real edit costs stay far below it.
inline constexpr double kForbiddenCost = 1e6;

struct LapResult {
  std::vector<int> row_to_col;  // permutation: row i is assigned column row_to_col[i]
  double total = 0.0;           // sum of assigned cells, accumulated in row order
};

// Minimum-cost perfect assignment of a square matrix with finite,
// non-negative entries. Columns are scanned in index order and only strict
// improvements replace a candidate, so ties resolve identically every run.
inline LapResult solve_lap(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols())
    throw Error(ErrorKind::kShape, "assignment matrix is " +
                                       std::to_string(cost.rows()) + "x" +
                                       std::to_string(cost.cols()) +
                                       ", expected square");
  const int n = static_cast<int>(cost.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(cost(i, j)) || cost(i, j) < 0.0)
        throw Error(ErrorKind::kValue,
                    "assignment cost must be finite and non-negative");

  LapResult result;
  if (n == 0) return result;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based bookkeeping; column 0 is the virtual root of each search tree.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<int> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<char> visited(n + 1);

  for (int row = 1; row <= n; ++row) {
    col_owner[0] = row;
    int col = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[col] = 1;
      const int i = col_owner[col];
      double delta = kInf;
      int next_col = 0;
      for (int j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const double reduced = cost(i - 1, j - 1) - row_pot[i] - col_pot[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next_col = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_pot[col_owner[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next_col;
    } while (col_owner[col] != 0);
    // Augment along the alternating path back to the root.
    do {
      const int prev = way[col];
      col_owner[col] = col_owner[prev];
      col = prev;
    } while (col != 0);
  }

  result.row_to_col.assign(n, -1);
  for (int j = 1; j <= n; ++j) result.row_to_col[col_owner[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) result.total += cost(i, result.row_to_col[i]);
  return result;
}

}  // namespace cfged
