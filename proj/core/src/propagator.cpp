#include "qse/propagator.hpp"

#include <cmath>
#include <string>

namespace qse {

void TimeGrid::validate() const {
    if (n_points < 2)
        fail(ErrorKind::Config, "grid.n_points must be >= 2");
    if (!(t1 > t0))
        fail(ErrorKind::Config, "grid requires t1 > t0");
    const double delta = effective_substep();
    if (!(delta > 0.0))
        fail(ErrorKind::Config, "grid.substep must be positive");
    if (delta > spacing() / 2.0)
        fail(ErrorKind::Config,
             "grid.substep must not exceed half the grid spacing (stencils "
             "would cross output points)");
}

Propagator::Propagator(const Operator& h0, double hbar)
    : spectral_(spectral_decompose(h0)), hbar_(hbar) {}

StateVector Propagator::evolve(const StateVector& psi0, double t) const {
    const double dt = t - psi0.time;
    const Vector modal = spectral_.eigenvectors.adjoint() * psi0.amplitudes;
    Vector phases =
        (spectral_.eigenvalues.cast<Complex>().array() * Complex(0.0, -dt / hbar_))
            .exp()
            .matrix();
    Vector amps = spectral_.eigenvectors * phases.cwiseProduct(modal);
    return StateVector{std::move(amps), psi0.shape, t};
}

StateVector evolve_state(const Operator& h0, const StateVector& psi0, double t,
                         double hbar) {
    if (h0.dim() != psi0.amplitudes.size())
        fail(ErrorKind::Dimension, "h0 dimension does not match state length");
    Propagator prop(h0, hbar);
    StateVector shifted = psi0;
    shifted.time = 0.0;
    StateVector out = prop.evolve(shifted, t);
    out.time = psi0.time + t;
    return out;
}

Trajectory sample_trajectory(const ModelSpec& spec, const StateVector& psi0,
                             const TimeGrid& grid) {
    grid.validate();
    const Operator h0 = build_total_hamiltonian(spec);
    if (h0.dim() != psi0.amplitudes.size())
        fail(ErrorKind::Dimension, "initial state does not match model dimension");

    Propagator prop(h0, spec.hbar);
    const double delta = grid.effective_substep();
    const double u0 = std::real(
        psi0.amplitudes.dot(h0.matrix * psi0.amplitudes));
    const double h0_scale = std::max(1.0, h0.matrix.norm());

    Trajectory traj{grid, spec, {}, {}, {}};
    traj.states.reserve(grid.n_points);
    traj.stencil_minus.reserve(grid.n_points);
    traj.stencil_plus.reserve(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const double t = grid.time_at(i);
        auto sample = [&](double tau) {
            StateVector psi = prop.evolve(psi0, tau);
            const double norm_dev = std::abs(psi.amplitudes.norm() - 1.0);
            if (norm_dev > 1e-12)
                fail(ErrorKind::Numeric, "propagated state lost normalization",
                     norm_dev);
            const double u = std::real(psi.amplitudes.dot(h0.matrix * psi.amplitudes));
            if (std::abs(u - u0) > 1e-10 * h0_scale)
                fail(ErrorKind::Numeric, "energy expectation drifted along trajectory",
                     std::abs(u - u0));
            return psi;
        };
        traj.stencil_minus.push_back(sample(t - delta));
        traj.states.push_back(sample(t));
        traj.stencil_plus.push_back(sample(t + delta));
    }
    return traj;
}

}  // namespace qse
