#pragma once

#include <complex>
#include <Eigen/Dense>

#include "qse/errors.hpp"

namespace qse {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Hard cap on the universe dimension for dense storage (configurable per
// call in kron).
inline constexpr int kMaxUniverseDim = 4096;

// Subsystem dimensions (d1, d2) with the convention d1 <= d2. Flat index
// of |i> ⊗ |j> is i*d2 + j (row-major over subsystem 1); every module
// shares this convention.
struct BipartiteShape {
    int d1 = 1;
    int d2 = 1;

    BipartiteShape() = default;
    BipartiteShape(int d1_, int d2_);

    int total() const { return d1 * d2; }
    int dim(int k) const;  // k in {1, 2}

    bool operator==(const BipartiteShape&) const = default;
};

// Normalized pure state of the universe at a given time.
struct StateVector {
    Vector amplitudes;
    BipartiteShape shape;
    double time = 0.0;
};

// Validates length and unit norm (1e-12).
StateVector make_state(Vector amplitudes, BipartiteShape shape, double time = 0.0);

// |i> ⊗ |j> in the computational basis.
StateVector basis_product_state(const BipartiteShape& shape, int i, int j,
                                double time = 0.0);

// Dense complex square matrix with an optional Hermitian tag. When the tag
// is set, construction verifies ||A - A'||_F <= 1e-10 * max(1, ||A||_F).
struct Operator {
    Matrix matrix;
    bool hermitian = false;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

Operator make_operator(Matrix m, bool hermitian = false);
Operator identity_operator(int dim);

// ||A - A'||_F / max(1, ||A||_F)
double hermitian_asymmetry(const Matrix& a);

// Kronecker product, dim(a)*dim(b); index convention matches the
// StateVector flattening. Fails with a Size error past max_dim.
Operator kron(const Operator& a, const Operator& b, int max_dim = kMaxUniverseDim);

// Reduced density matrix of subsystem `keep` (1 or 2).
Operator partial_trace(const Operator& rho, const BipartiteShape& shape, int keep);

// d1 x d2 matrix C with C(i,j) = amplitude of |i> ⊗ |j>. Unit Frobenius
// norm for normalized input; exact bijection with the flat layout.
Matrix coefficient_matrix(const StateVector& psi);
StateVector state_from_coefficients(const Matrix& c, const BipartiteShape& shape,
                                    double time = 0.0);

struct Spectral {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // unitary, columns phase-fixed
};

// Hermitian eigendecomposition with a deterministic phase convention: the
// largest-magnitude component of each eigenvector is made real positive.
Spectral spectral_decompose(const Operator& h);

struct Hermitized {
    Operator h;        // (a + a')/2
    double asymmetry;  // ||a - a'||_F / max(1, ||a||_F)
};

Hermitized hermitize(const Operator& a);

// exp(-i h t / hbar) from a cached spectral decomposition.
Matrix unitary_from_spectral(const Spectral& s, double t, double hbar);

// In-place deterministic phase fix: per column, the largest-magnitude
// entry is rotated to be real positive. Returns the applied phases so a
// paired basis can be counter-rotated.
Vector fix_column_phases(Matrix& m);

}  // namespace qse
