#include "ais/vision/hungarian.hpp"

#include <limits>

namespace ais::vision {

// Shortest-augmenting-path formulation with row/column potentials.  The
// matrix is padded to square with zeros, which leaves the optimum over the
// real entries untouched.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    const int n = std::max(rows, cols);
    if (n == 0) return {};

    const double inf = std::numeric_limits<double>::infinity();
    auto at = [&](int r, int c) -> double {
        return (r < rows && c < cols) ? cost(r, c) : 0.0;
    };

    // 1-based internals, standard potentials u/v with way[] back-pointers.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
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
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(rows, -1);
    for (int j = 1; j <= n; ++j) {
        const int r = p[j] - 1;
        if (r < rows && j - 1 < cols) row_to_col[r] = j - 1;
    }
    return row_to_col;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_to_col) {
    double total = 0.0;
    for (int r = 0; r < static_cast<int>(row_to_col.size()); ++r)
        if (row_to_col[r] >= 0) total += cost(r, row_to_col[r]);
    return total;
}

}  // namespace ais::vision
