#include "doctest.h"
#include "qse/models.hpp"

using namespace qse;

TEST_CASE("exchange preset matrices") {
    const ModelSpec spec = preset_exchange_qubits(1.0, 0.8, 0.1);
    CHECK(spec.h1.matrix(0, 0) == Complex(-0.5));
    CHECK(spec.h1.matrix(1, 1) == Complex(0.5));
    CHECK(spec.h2.matrix(1, 1) == Complex(0.4));
    // exchange term couples |1,0> (flat index 2) and |0,1> (flat index 1)
    CHECK(spec.h_int.matrix(2, 1) == Complex(0.1));
    CHECK(spec.h_int.matrix(1, 2) == Complex(0.1));
    CHECK(spec.h_int.matrix(0, 0) == Complex(0.0));
    CHECK_NOTHROW(validate_model(spec));
}

TEST_CASE("total Hamiltonian assembles all three terms") {
    const ModelSpec spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    const Operator h0 = build_total_hamiltonian(spec);
    REQUIRE(h0.dim() == 4);
    CHECK(h0.matrix(0, 0) == Complex(-1.0));
    CHECK(h0.matrix(3, 3) == Complex(1.0));
    CHECK(h0.matrix(1, 2) == Complex(0.1));
    CHECK(hermitian_asymmetry(h0.matrix) < 1e-15);
}

TEST_CASE("random_dense is deterministic in the seed") {
    const ModelSpec a = preset_random_dense(2, 3, 1.5, 99);
    const ModelSpec b = preset_random_dense(2, 3, 1.5, 99);
    const ModelSpec c = preset_random_dense(2, 3, 1.5, 100);
    CHECK((a.h1.matrix - b.h1.matrix).norm() == 0.0);
    CHECK((a.h2.matrix - b.h2.matrix).norm() == 0.0);
    CHECK((a.h_int.matrix - b.h_int.matrix).norm() == 0.0);
    CHECK((a.h_int.matrix - c.h_int.matrix).norm() > 1e-3);
}

TEST_CASE("random_dense normalization and strength scaling") {
    const ModelSpec spec = preset_random_dense(3, 3, 2.0, 5);
    const auto s1 = spectral_decompose(spec.h1);
    CHECK(s1.eigenvalues.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    const auto si = spectral_decompose(spec.h_int);
    CHECK(si.eigenvalues.cwiseAbs().maxCoeff() == doctest::Approx(2.0));

    const ModelSpec off = preset_random_dense(3, 3, 0.0, 5);
    CHECK(off.h_int.matrix.norm() == 0.0);
    CHECK((off.h1.matrix - spec.h1.matrix).norm() == 0.0);
}

TEST_CASE("validate_model rejects a non-Hermitian operator") {
    ModelSpec spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    spec.h2.matrix(0, 1) = Complex(0.0, 1.0);
    CHECK_THROWS_AS(validate_model(spec), Error);
}

TEST_CASE("validate_model rejects mismatched dimensions") {
    ModelSpec spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    spec.h1 = identity_operator(3);
    CHECK_THROWS_AS(validate_model(spec), Error);
}
