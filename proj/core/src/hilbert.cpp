#include "qse/hilbert.hpp"

#include <cmath>
#include <string>

namespace qse {

BipartiteShape::BipartiteShape(int d1_, int d2_) : d1(d1_), d2(d2_) {
    if (d1 < 1 || d2 < 1)
        fail(ErrorKind::Dimension, "subsystem dimensions must be >= 1");
    if (d1 > d2)
        fail(ErrorKind::Dimension, "convention requires d1 <= d2, got d1=" +
                                       std::to_string(d1) + " d2=" + std::to_string(d2));
}

int BipartiteShape::dim(int k) const {
    if (k == 1) return d1;
    if (k == 2) return d2;
    fail(ErrorKind::Usage, "subsystem index must be 1 or 2");
}

StateVector make_state(Vector amplitudes, BipartiteShape shape, double time) {
    if (amplitudes.size() != shape.total())
        fail(ErrorKind::Dimension,
             "state length " + std::to_string(amplitudes.size()) +
                 " does not match d1*d2 = " + std::to_string(shape.total()));
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-12)
        fail(ErrorKind::Numeric, "state norm deviates from 1 by " +
                                     std::to_string(std::abs(norm - 1.0)),
             std::abs(norm - 1.0));
    return StateVector{std::move(amplitudes), shape, time};
}

StateVector basis_product_state(const BipartiteShape& shape, int i, int j, double time) {
    if (i < 0 || i >= shape.d1 || j < 0 || j >= shape.d2)
        fail(ErrorKind::Dimension, "basis indices out of range");
    Vector amps = Vector::Zero(shape.total());
    amps(i * shape.d2 + j) = 1.0;
    return StateVector{std::move(amps), shape, time};
}

double hermitian_asymmetry(const Matrix& a) {
    const double na = a.norm();
    return (a - a.adjoint()).norm() / std::max(1.0, na);
}

Operator make_operator(Matrix m, bool hermitian) {
    if (m.rows() != m.cols())
        fail(ErrorKind::Dimension, "operator matrix must be square");
    if (hermitian) {
        const double asym = hermitian_asymmetry(m);
        if (asym > 1e-10)
            fail(ErrorKind::Model, "matrix tagged Hermitian has asymmetry " +
                                       std::to_string(asym),
                 asym);
    }
    return Operator{std::move(m), hermitian};
}

Operator identity_operator(int dim) {
    return Operator{Matrix::Identity(dim, dim), true};
}

Operator kron(const Operator& a, const Operator& b, int max_dim) {
    const long dim = static_cast<long>(a.dim()) * b.dim();
    if (dim > max_dim)
        fail(ErrorKind::Size, "kron result dimension " + std::to_string(dim) +
                                  " exceeds cap " + std::to_string(max_dim));
    Matrix out(dim, dim);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) =
                a.matrix(i, j) * b.matrix;
    return Operator{std::move(out), a.hermitian && b.hermitian};
}

Operator partial_trace(const Operator& rho, const BipartiteShape& shape, int keep) {
    if (rho.dim() != shape.total())
        fail(ErrorKind::Dimension, "density matrix dimension " +
                                       std::to_string(rho.dim()) +
                                       " does not match shape total " +
                                       std::to_string(shape.total()));
    if (keep != 1 && keep != 2)
        fail(ErrorKind::Usage, "keep must be 1 or 2");

    const int d1 = shape.d1, d2 = shape.d2;
    const int dk = keep == 1 ? d1 : d2;
    Matrix out = Matrix::Zero(dk, dk);
    if (keep == 1) {
        for (int i = 0; i < d1; ++i)
            for (int ip = 0; ip < d1; ++ip)
                for (int j = 0; j < d2; ++j)
                    out(i, ip) += rho.matrix(i * d2 + j, ip * d2 + j);
    } else {
        for (int j = 0; j < d2; ++j)
            for (int jp = 0; jp < d2; ++jp)
                for (int i = 0; i < d1; ++i)
                    out(j, jp) += rho.matrix(i * d2 + j, i * d2 + jp);
    }
    return Operator{std::move(out), rho.hermitian};
}

Matrix coefficient_matrix(const StateVector& psi) {
    const int d1 = psi.shape.d1, d2 = psi.shape.d2;
    // Row-major reshape; bit-exact round trip with state_from_coefficients.
    return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(psi.amplitudes.data(), d1, d2);
}

StateVector state_from_coefficients(const Matrix& c, const BipartiteShape& shape,
                                    double time) {
    if (c.rows() != shape.d1 || c.cols() != shape.d2)
        fail(ErrorKind::Dimension, "coefficient matrix shape mismatch");
    Vector amps(shape.total());
    for (int i = 0; i < shape.d1; ++i)
        for (int j = 0; j < shape.d2; ++j)
            amps(i * shape.d2 + j) = c(i, j);
    return StateVector{std::move(amps), shape, time};
}

Vector fix_column_phases(Matrix& m) {
    Vector phases(m.cols());
    for (int j = 0; j < m.cols(); ++j) {
        Eigen::Index imax = 0;
        m.col(j).cwiseAbs().maxCoeff(&imax);
        const Complex z = m(imax, j);
        const double a = std::abs(z);
        const Complex phase = a > 0.0 ? z / a : Complex(1.0, 0.0);
        m.col(j) /= phase;
        phases(j) = phase;
    }
    return phases;
}

Spectral spectral_decompose(const Operator& h) {
    const double asym = hermitian_asymmetry(h.matrix);
    if (asym > 1e-10)
        fail(ErrorKind::Numeric,
             "spectral_decompose on non-Hermitian matrix, asymmetry " +
                 std::to_string(asym),
             asym);
    Eigen::SelfAdjointEigenSolver<Matrix> solver((h.matrix + h.matrix.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success)
        fail(ErrorKind::Numeric, "eigendecomposition did not converge");
    Spectral out{solver.eigenvalues(), solver.eigenvectors()};
    fix_column_phases(out.eigenvectors);
    return out;
}

Hermitized hermitize(const Operator& a) {
    const double asym = hermitian_asymmetry(a.matrix);
    Matrix h = (a.matrix + a.matrix.adjoint()) / 2.0;
    return Hermitized{Operator{std::move(h), true}, asym};
}

Matrix unitary_from_spectral(const Spectral& s, double t, double hbar) {
    const Vector phases =
        (Complex(0, -t / hbar) * s.eigenvalues.cast<Complex>().array()).exp();
    return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

}  // namespace qse
