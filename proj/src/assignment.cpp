#include "pmbm/assignment.hpp"

#include <limits>

#include "pmbm/error.hpp"

namespace pmbm {

Assignment min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    throw InvalidArgument("assignment needs a square cost matrix");
  }
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};

  // 1-based arrays; column 0 is a virtual column holding the row being added.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of_col(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = row_of_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.column_of_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) out.column_of_row[row_of_col[j] - 1] = j - 1;
  // Sum the chosen entries directly rather than trusting the potentials.
  for (int i = 0; i < n; ++i) out.cost += cost(i, out.column_of_row[i]);
  return out;
}

}  // namespace pmbm
