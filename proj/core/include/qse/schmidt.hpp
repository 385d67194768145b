#pragma once

#include <vector>

#include "qse/propagator.hpp"
#include "qse/tolerances.hpp"

namespace qse {

enum class GaugeKind {
    BareParallelTransport,  // default: phases referenced to the bare H1 evolution
    ZeroDiagonal,           // plain parallel transport (identity reference)
    LinearShift             // bare parallel transport plus theta_j(t) = alpha * t
};

struct GaugeConvention {
    GaugeKind kind = GaugeKind::BareParallelTransport;
    double alpha = 0.0;  // used by LinearShift only
};

// Schmidt decomposition of the universe state at one instant. lambdas has
// length d1; basis1 (d1 x d1) and basis2 (d2 x d1) hold the paired local
// vectors as columns, reconstructing the coefficient matrix as
// basis1 * diag(lambdas) * basis2^T.
struct SchmidtFrame {
    double time = 0.0;
    RealVector lambdas;
    Matrix basis1;
    Matrix basis2;
    int rank = 0;  // count of lambdas above rank_tol
    bool aligned = false;
    int gauge_id = 0;  // set by track/apply_gauge; 0 for raw frames
};

// SVD of the coefficient matrix with a deterministic raw phase convention
// (largest-magnitude component of each basis1 column real positive; the
// paired basis2 column absorbs the inverse phase).
SchmidtFrame schmidt_decompose(const StateVector& psi, double rank_tol = 1e-8);

// Make `raw` continuous with the already-aligned `prev`: column ordering by
// optimal assignment on overlap magnitudes, closest-unitary rotation inside
// degenerate lambda blocks, then per-column phase fixing against the
// gauge's reference propagator over dt = raw.time - prev.time (which may be
// negative for the backward stencil at the anchor).
SchmidtFrame align_frame(const SchmidtFrame& prev, SchmidtFrame raw,
                         const ModelSpec& spec, double dt, GaugeConvention gauge,
                         double degeneracy_tol = 1e-6, double rank_tol = 1e-8);

// Aligned frames covering every grid and stencil time of a trajectory.
struct FrameSeries {
    TimeGrid grid;
    GaugeConvention gauge;
    ModelSpec model;
    int gauge_id = 0;
    std::vector<SchmidtFrame> at;      // grid times
    std::vector<SchmidtFrame> minus;   // t - substep
    std::vector<SchmidtFrame> plus;    // t + substep
};

// Decompose every stored state and align pairwise in time order, anchored
// at the deterministic raw convention at t0.
FrameSeries track(const Trajectory& traj, GaugeConvention gauge = {},
                  double rank_tol = 1e-8, double degeneracy_tol = 1e-6);

// -sum lambda_j^2 ln lambda_j^2 with 0 ln 0 := 0.
double entanglement_entropy(const SchmidtFrame& frame);

// sum_j lambda_j |phi_j1> ⊗ |phi_j2>
StateVector reconstruct_state(const SchmidtFrame& frame, const BipartiteShape& shape);

// rho^(k) = sum_j lambda_j^2 |phi_jk><phi_jk|
Matrix density_from_frame(const SchmidtFrame& frame, int k);

}  // namespace qse
