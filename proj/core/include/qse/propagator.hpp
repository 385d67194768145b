#pragma once

#include <vector>

#include "qse/models.hpp"

namespace qse {

// Output sampling plan. Besides the n_points grid samples, every point
// carries two stencil samples at t ± substep for central-difference
// derivatives of the Schmidt frames.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int n_points = 2;
    double substep = 0.0;  // 0 selects the default (t1-t0)/(1000*n_points)

    void validate() const;
    double spacing() const { return (t1 - t0) / (n_points - 1); }
    double time_at(int i) const { return t0 + spacing() * i; }
    double effective_substep() const {
        return substep > 0.0 ? substep : (t1 - t0) / (1000.0 * n_points);
    }
};

// Exact spectral propagator for a fixed Hermitian H0 (no step-to-step
// error accumulation: every target time is reached directly).
class Propagator {
  public:
    Propagator(const Operator& h0, double hbar);

    // |psi(t)> from |psi0> evolved over the absolute time difference
    // t - psi0.time.
    StateVector evolve(const StateVector& psi0, double t) const;

    const Spectral& spectral() const { return spectral_; }
    double hbar() const { return hbar_; }

  private:
    Spectral spectral_;
    double hbar_;
};

// Free-function form: psi0 evolved for a duration t under h0.
StateVector evolve_state(const Operator& h0, const StateVector& psi0, double t,
                         double hbar);

struct Trajectory {
    TimeGrid grid;
    ModelSpec spec;
    std::vector<StateVector> states;         // at grid times
    std::vector<StateVector> stencil_minus;  // at t - substep
    std::vector<StateVector> stencil_plus;   // at t + substep
};

Trajectory sample_trajectory(const ModelSpec& spec, const StateVector& psi0,
                             const TimeGrid& grid);

}  // namespace qse
