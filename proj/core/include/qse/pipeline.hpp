#pragma once

#include "qse/config.hpp"

namespace qse {

// Everything a run produces before serialization.
struct SimulationResult {
    std::vector<EnergyRecord> records;          // one per grid point
    RealMatrix lambda_sq;                       // n_points x d1 (aligned order)
    std::vector<EffectiveHamiltonian> eff1;     // per grid point, split when full rank
    std::vector<EffectiveHamiltonian> eff2;
    struct Summary {
        double max_u0_drift = 0.0;              // relative to ||H0||_F
        double max_additivity_residual = 0.0;
        double max_master_residual_1 = 0.0;
        double max_master_residual_2 = 0.0;
        double max_reconstruction_error = 0.0;
        double max_htilde_bare_dev_1 = 0.0;     // occupied-subspace deviation for k=2
        double max_htilde_bare_dev_2 = 0.0;
        double max_entropy = 0.0;
    } summary;
    std::string status = "ok";  // "invariant_failure" when a run bound is exceeded
};

SimulationResult run_simulation(const RunConfig& cfg);

// Writes energies.csv / lambdas.csv / effective_hamiltonians.json (per the
// config's outputs set) plus report.json into out_dir. Deterministic
// formatting: 17 significant digits, '.' separator, '\n' line endings.
void write_run_outputs(const SimulationResult& result, const RunConfig& cfg,
                       const std::string& out_dir);

// %.17g rendering used by every writer.
std::string format_double(double v);

}  // namespace qse
