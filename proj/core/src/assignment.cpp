#include "qse/assignment.hpp"

#include <limits>

namespace qse {

// Jonker-style shortest augmenting path formulation with row/column
// potentials; 1-based internal arrays, column 0 is the virtual root.
std::vector<int> solve_assignment(const RealMatrix& cost) {
    if (cost.rows() != cost.cols())
        fail(ErrorKind::Usage, "assignment cost matrix must be square");
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();

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
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                // strict comparison keeps the lowest-index column on ties
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

    std::vector<int> perm(n);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) perm[p[j] - 1] = j - 1;
    return perm;
}

}  // namespace qse
