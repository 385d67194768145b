#include <cmath>

#include "doctest.h"
#include "qse/hilbert.hpp"

using namespace qse;

TEST_CASE("make_state rejects unnormalized amplitudes") {
    Vector a = Vector::Zero(4);
    a(0) = 2.0;
    CHECK_THROWS_AS(make_state(a, BipartiteShape(2, 2)), Error);
    a(0) = 1.0;
    CHECK_NOTHROW(make_state(a, BipartiteShape(2, 2)));
}

TEST_CASE("kron dimensions and entries") {
    Matrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    const Operator k = kron(Operator{a, false}, Operator{b, false});
    REQUIRE(k.dim() == 4);
    CHECK(k.matrix(0, 1) == Complex(1.0));
    CHECK(k.matrix(0, 3) == Complex(2.0));
    CHECK(k.matrix(2, 1) == Complex(3.0));
}

TEST_CASE("kron enforces the universe dimension cap") {
    const Operator big = identity_operator(100);
    CHECK_THROWS_AS(kron(big, big), Error);
}

TEST_CASE("partial trace of a product density matrix") {
    const BipartiteShape shape(2, 3);
    const StateVector psi = basis_product_state(shape, 1, 2);
    const Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    const Operator rho1 = partial_trace(Operator{rho, true}, shape, 1);
    const Operator rho2 = partial_trace(Operator{rho, true}, shape, 2);
    REQUIRE(rho1.dim() == 2);
    REQUIRE(rho2.dim() == 3);
    CHECK(std::abs(rho1.matrix(1, 1) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(rho2.matrix(2, 2) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(rho1.matrix.trace() - Complex(1.0)) < 1e-14);
    CHECK(std::abs(rho2.matrix.trace() - Complex(1.0)) < 1e-14);
}

TEST_CASE("partial traces of an entangled state share their spectrum") {
    const BipartiteShape shape(2, 2);
    Vector a = Vector::Zero(4);
    a(0) = std::sqrt(0.3);
    a(3) = std::sqrt(0.7);
    const StateVector psi = make_state(a, shape);
    const Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    const auto s1 = spectral_decompose(partial_trace(Operator{rho, true}, shape, 1));
    const auto s2 = spectral_decompose(partial_trace(Operator{rho, true}, shape, 2));
    CHECK((s1.eigenvalues - s2.eigenvalues).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spectral_decompose reproduces the operator") {
    Matrix h(2, 2);
    h << 1.0, Complex(0.0, -0.5), Complex(0.0, 0.5), -1.0;
    const Operator op{h, true};
    const Spectral s = spectral_decompose(op);
    const Matrix back = s.eigenvectors *
                        s.eigenvalues.cast<Complex>().asDiagonal() *
                        s.eigenvectors.adjoint();
    CHECK((back - h).norm() < 1e-13);
    CHECK((s.eigenvectors.adjoint() * s.eigenvectors -
           Matrix::Identity(2, 2))
              .norm() < 1e-13);
}

TEST_CASE("spectral_decompose rejects non-Hermitian input") {
    Matrix h(2, 2);
    h << 0, 1, 0, 0;
    CHECK_THROWS_AS(spectral_decompose(Operator{h, false}), Error);
}

TEST_CASE("unitary_from_spectral matches a closed-form exponential") {
    Matrix h(2, 2);
    h << 0, 1, 1, 0;  // sigma_x
    const double t = 0.7;
    const Matrix u = unitary_from_spectral(spectral_decompose(Operator{h, true}), t, 1.0);
    Matrix expected(2, 2);
    expected << std::cos(t), Complex(0.0, -std::sin(t)),
        Complex(0.0, -std::sin(t)), std::cos(t);
    CHECK((u - expected).norm() < 1e-13);
}

TEST_CASE("hermitize splits off the measured asymmetry") {
    Matrix m(2, 2);
    m << 1.0, Complex(0.5, 1e-6), Complex(0.5, 1e-6), 2.0;
    const Hermitized h = hermitize(Operator{m, false});
    CHECK(h.asymmetry > 0.0);
    CHECK(hermitian_asymmetry(h.h.matrix) < 1e-15);
}

TEST_CASE("coefficient matrix round trip") {
    const BipartiteShape shape(2, 3);
    Vector a(6);
    for (int i = 0; i < 6; ++i) a(i) = Complex(i + 1, -i);
    a /= a.norm();
    const StateVector psi = make_state(a, shape, 0.25);
    const Matrix c = coefficient_matrix(psi);
    REQUIRE(c.rows() == 2);
    REQUIRE(c.cols() == 3);
    CHECK(c(1, 2) == psi.amplitudes(5));
    const StateVector back = state_from_coefficients(c, shape, psi.time);
    CHECK((back.amplitudes - psi.amplitudes).norm() < 1e-15);
    CHECK(back.time == psi.time);
}
