#pragma once

#include <vector>

#include "qse/hilbert.hpp"

namespace qse {

// Minimum-cost assignment on a square cost matrix (Hungarian method,
// O(n^3) potentials formulation). Returns perm with perm[row] = column.
std::vector<int> solve_assignment(const RealMatrix& cost);

}  // namespace qse
