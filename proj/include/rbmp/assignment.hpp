#pragma once

#include <vector>

namespace rbmp {

/// Row-major sparse cost matrix (CSR). Absent entries are forbidden pairs.
/// `rows` tracks the number of add_row calls.
struct SparseCostMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_start{0};
  std::vector<int> col_index;
  std::vector<double> cost;

  void add_row(const std::vector<std::pair<int, double>>& entries);
};

struct Assignment {
  std::vector<int> row_to_col;
  double total_cost = 0.0;
};

/// Minimum-cost assignment of every row to a distinct column by successive
/// shortest augmenting paths (Dijkstra on reduced costs with potentials).
/// Costs must be nonnegative. Throws std::runtime_error if some row cannot be
/// assigned.
Assignment solve_assignment(const SparseCostMatrix& matrix);

}  // namespace rbmp
