#pragma once

#include <cstdint>
#include <string>

#include "qse/hilbert.hpp"

namespace qse {

// Bare Hamiltonians of both subsystems plus the interaction term, all
// Hermitian. hbar is carried explicitly so units stay uniform.
struct ModelSpec {
    BipartiteShape shape;
    Operator h1;     // d1 x d1
    Operator h2;     // d2 x d2
    Operator h_int;  // (d1*d2) x (d1*d2)
    double hbar = 1.0;
    std::string label;
};

void validate_model(const ModelSpec& spec);

// H0 = H1 ⊗ 1 + 1 ⊗ H2 + H_int
Operator build_total_hamiltonian(const ModelSpec& spec);

// Two qubits with level splittings omega1, omega2 and an excitation
// exchange coupling g (sigma+ ⊗ sigma- + h.c.). Basis index 1 is the
// excited level, so h_k = (omega_k/2) diag(-1, +1), and |1>⊗|0> carries
// bare energy (omega1 - omega2)/2.
ModelSpec preset_exchange_qubits(double omega1, double omega2, double g);

// Seeded Gaussian Hermitian ensemble: H = (A + A')/2 with i.i.d. standard
// complex normal entries of A (std::mt19937_64 + std::normal_distribution,
// h1 then h2 then h_int drawn from one stream), each normalized to unit
// spectral norm; h_int additionally scaled by `strength`.
ModelSpec preset_random_dense(int d1, int d2, double strength, std::uint64_t seed);

}  // namespace qse
