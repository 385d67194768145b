#include <algorithm>
#include <random>

#include "doctest.h"
#include "qse/assignment.hpp"

using namespace qse;

namespace {

double assignment_cost(const RealMatrix& cost, const std::vector<int>& perm) {
    double total = 0.0;
    for (std::size_t r = 0; r < perm.size(); ++r) total += cost(r, perm[r]);
    return total;
}

bool is_permutation(const std::vector<int>& perm) {
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i)) return false;
    return true;
}

}  // namespace

TEST_CASE("identity is optimal when the diagonal dominates") {
    RealMatrix cost(3, 3);
    cost << 0, 5, 5, 5, 0, 5, 5, 5, 0;
    const auto perm = solve_assignment(cost);
    CHECK(perm == std::vector<int>{0, 1, 2});
}

TEST_CASE("off-diagonal optimum is found") {
    RealMatrix cost(2, 2);
    cost << 10, 1, 1, 10;
    CHECK(solve_assignment(cost) == std::vector<int>{1, 0});
}

TEST_CASE("agrees with brute force on random matrices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        RealMatrix cost(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cost(i, j) = uni(rng);

        const auto perm = solve_assignment(cost);
        REQUIRE(is_permutation(perm));

        std::vector<int> brute(n);
        for (int i = 0; i < n; ++i) brute[i] = i;
        double best = 1e300;
        do {
            best = std::min(best, assignment_cost(cost, brute));
        } while (std::next_permutation(brute.begin(), brute.end()));
        CHECK(assignment_cost(cost, perm) == doctest::Approx(best).epsilon(1e-12));
    }
}
