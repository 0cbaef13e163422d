#pragma once

#include <vector>

#include <Eigen/Core>

namespace pmbm {

struct Assignment {
  std::vector<int> column_of_row;
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with row/column potentials, O(n^3)).
Assignment min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace pmbm
