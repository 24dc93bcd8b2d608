#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ais::vision {

/// Minimum-cost one-to-one assignment (Kuhn-Munkres, O(n^3) potentials form).
/// Returns row_to_col: for each row, the assigned column or -1.  Rectangular
/// matrices are handled by padding; padded assignments come back as -1.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Total cost of an assignment produced by solve_assignment.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_to_col);

}  // namespace ais::vision
