#include "rbmp/assignment.hpp"

#include <limits>
#include <queue>
#include <stdexcept>

namespace rbmp {

void SparseCostMatrix::add_row(const std::vector<std::pair<int, double>>& entries) {
  for (const auto& [col, c] : entries) {
    if (col < 0 || col >= cols) throw std::out_of_range("SparseCostMatrix: column index out of range");
    if (!(c >= 0.0)) throw std::domain_error("SparseCostMatrix: costs must be nonnegative");
    col_index.push_back(col);
    cost.push_back(c);
  }
  row_start.push_back(static_cast<int>(col_index.size()));
  rows = static_cast<int>(row_start.size()) - 1;
}

Assignment solve_assignment(const SparseCostMatrix& matrix) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int rows = matrix.rows;
  const int cols = matrix.cols;

  // Reduced cost c(i,j) - u[i] - v[j] is nonnegative on every edge and zero on
  // matched edges; all-zero potentials are valid for nonnegative costs.
  std::vector<double> u(rows, 0.0), v(cols, 0.0);
  std::vector<int> row_match(rows, -1), col_match(cols, -1);

  std::vector<double> dist(cols, kInf);
  std::vector<int> parent_row(cols, -1);
  std::vector<char> done(cols, 0);
  std::vector<int> touched;
  std::vector<int> finalized;
  using Item = std::pair<double, int>;

  for (int source = 0; source < rows; ++source) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    touched.clear();
    finalized.clear();

    auto relax_from = [&](int row, double base) {
      for (int e = matrix.row_start[row]; e < matrix.row_start[row + 1]; ++e) {
        const int col = matrix.col_index[e];
        if (done[col]) continue;
        const double nd = base + matrix.cost[e] - u[row] - v[col];
        if (nd < dist[col]) {
          if (dist[col] == kInf) touched.push_back(col);
          dist[col] = nd;
          parent_row[col] = row;
          heap.emplace(nd, col);
        }
      }
    };

    relax_from(source, 0.0);
    int free_col = -1;
    double delta = 0.0;
    while (!heap.empty()) {
      const auto [d, col] = heap.top();
      heap.pop();
      if (done[col] || d > dist[col]) continue;
      done[col] = 1;
      finalized.push_back(col);
      if (col_match[col] < 0) {
        free_col = col;
        delta = d;
        break;
      }
      relax_from(col_match[col], d);
    }
    if (free_col < 0) throw std::runtime_error("solve_assignment: row " + std::to_string(source) + " cannot be assigned");

    u[source] += delta;
    for (int col : finalized) {
      const double shift = delta - dist[col];
      v[col] -= shift;
      if (col_match[col] >= 0) u[col_match[col]] += shift;
    }
    // Augment along the parent chain back to the source row.
    int col = free_col;
    while (col >= 0) {
      const int row = parent_row[col];
      const int prev = row_match[row];
      row_match[row] = col;
      col_match[col] = row;
      col = (row == source) ? -1 : prev;
    }
    for (int c : touched) {
      dist[c] = kInf;
      parent_row[c] = -1;
      done[c] = 0;
    }
  }

  Assignment out;
  out.row_to_col = row_match;
  for (int row = 0; row < rows; ++row) {
    const int col = row_match[row];
    for (int e = matrix.row_start[row]; e < matrix.row_start[row + 1]; ++e) {
      if (matrix.col_index[e] == col) {
        out.total_cost += matrix.cost[e];
        break;
      }
    }
  }
  return out;
}

}  // namespace rbmp
