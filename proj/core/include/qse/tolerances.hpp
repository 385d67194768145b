#pragma once

namespace qse {

// Central tolerance configuration. Defaults are the contract values used
// throughout the library and the acceptance battery; tests that tighten
// the stencil re-run with a modified copy.
struct Tolerances {
    double norm_tol = 1e-12;        // state normalization
    double hermitian_tol = 1e-10;   // relative Frobenius asymmetry accepted as Hermitian
    double rank_tol = 1e-8;         // Schmidt coefficient occupation threshold
    double degeneracy_tol = 1e-6;   // relative to lambda_max, degenerate-block grouping
    double overlap_floor = 0.5;     // minimum alignment overlap before a continuity error
    double asymmetry_limit = 1e-3;  // stencil-quality ceiling on raw h_tilde asymmetry
    double imag_energy_tol = 1e-12; // imaginary residue allowed in energy expectations
};

}  // namespace qse
