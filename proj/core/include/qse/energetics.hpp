#pragma once

#include <array>
#include <vector>

#include "qse/schmidt.hpp"

namespace qse {

// Local effective Hamiltonian at one sampled time, with its split into
// bare + Lamb-shift-like + off-diagonal parts once populated.
struct EffectiveHamiltonian {
    int subsystem = 1;
    double time = 0.0;
    Operator h_tilde;       // Hermitized generator of the Schmidt basis motion
    Operator h_ls;          // diagonal (block-diagonal) in the bare eigenbasis
    Operator h_x;           // purely off-diagonal remainder
    bool split_done = false;
    double asymmetry = 0.0;  // pre-hermitization stencil diagnostic
    bool occupied_only = false;  // rank < d_k: only the occupied restriction exists
    int gauge_id = 0;
};

// h_tilde = i hbar sum_j (d/dt |phi_j>) <phi_j| via the central-difference
// stencil stored in the series. Fails with a Usage error on unaligned
// frames, and with a Numeric error when the raw asymmetry exceeds the
// stencil-quality limit.
EffectiveHamiltonian effective_hamiltonian(const FrameSeries& series, int k,
                                           int t_index,
                                           const Tolerances& tol = {});

// Populate h_ls / h_x: the difference to the bare Hamiltonian expressed in
// the bare eigenbasis, split into its (block-)diagonal and off-diagonal
// parts. Within degenerate bare eigenspaces "diagonal" means block-diagonal.
EffectiveHamiltonian split_effective(EffectiveHamiltonian eff, const ModelSpec& spec);

// Independent construction of the same split from the projections
// r_jl(t) = <b_j|phi_l(t)> e^{+i b_j t / hbar} (time origin fixed at 0),
// differentiated on the stencil. Requires full rank.
struct ProjectionSplit {
    Operator h_ls;
    Operator h_x;
};
ProjectionSplit lamb_shift_from_projections(const FrameSeries& series, int k,
                                            int t_index);

// U0 = <psi|H0|psi>; the imaginary residue must stay below 1e-12.
double total_energy(const StateVector& psi, const Operator& h0);
double total_energy(const StateVector& psi, const ModelSpec& spec);

// U^(k) = sum_j lambda_j^2 <phi_j|h_tilde|phi_j>; valid with occupied-only
// h_tilde as well since <phi_j|h_tilde|phi_j> = i hbar <phi_j|dphi_j/dt>.
double local_energy(const SchmidtFrame& frame, const EffectiveHamiltonian& eff);

double additivity_residual(double u0, double u1, double u2);

// D_t rho = i hbar sum_j (d lambda_j^2 / dt) |phi_j><phi_j|
Operator dissipator(const FrameSeries& series, int k, int t_index);

// || i hbar drho/dt - [h_tilde, rho] - D ||_F with rho rebuilt from frames.
double master_equation_residual(const FrameSeries& series, int k, int t_index,
                                const Tolerances& tol = {});

// Per-index phase functions theta_j(t): either (offset, rate) linear pairs
// or tabulated samples with finite-difference rates.
struct GaugeSpec {
    bool tabulated = false;
    // linear form
    std::vector<double> offsets;
    std::vector<double> rates;
    // tabulated form: times ascending, values(row = time sample, col = j)
    std::vector<double> times;
    RealMatrix values;

    static GaugeSpec linear(std::vector<double> offsets, std::vector<double> rates);
    static GaugeSpec uniform_linear(int count, double offset, double rate);
    static GaugeSpec from_table(std::vector<double> times, RealMatrix values);

    int index_count() const;
    double theta(int j, double t) const;
    double theta_dot(int j, double t) const;
};

// Multiply basis1 columns by e^{+i theta_j(t)} and basis2 by e^{-i theta_j(t)};
// the reconstructed universe state is unchanged.
FrameSeries apply_gauge(const FrameSeries& series, const GaugeSpec& g);

struct GaugeCheckReport {
    double generator_shift_max = 0.0;  // h_tilde' - h_tilde vs -(+) hbar theta_dot projectors
    double energy_shift_max = 0.0;     // U' - U vs the lambda^2-weighted rate sum
    double sum_invariance_max = 0.0;   // |(U1'+U2') - (U1+U2)|
};

GaugeCheckReport gauge_transform_check(const FrameSeries& series, const GaugeSpec& g,
                                       const Tolerances& tol = {});

struct EnergyRecord {
    double time = 0.0;
    double u0 = 0.0, u1 = 0.0, u2 = 0.0;
    double e1_bare = 0.0, e2_bare = 0.0, e_int = 0.0;
    double additivity_residual = 0.0;
    double master_residual_1 = 0.0, master_residual_2 = 0.0;
    double entropy = 0.0;
};

// Cached composite operators so per-time records do not rebuild krons.
struct ModelOperators {
    Operator h0;
    Operator h1_full;   // H1 ⊗ 1
    Operator h2_full;   // 1 ⊗ H2
};
ModelOperators assemble_operators(const ModelSpec& spec);

EnergyRecord energy_record(const FrameSeries& series, const EffectiveHamiltonian& eff1,
                           const EffectiveHamiltonian& eff2, const ModelSpec& spec,
                           const ModelOperators& ops, int t_index,
                           const Tolerances& tol = {});

}  // namespace qse
