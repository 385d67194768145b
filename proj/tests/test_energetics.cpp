#include <cmath>

#include "doctest.h"
#include "qse/energetics.hpp"

using namespace qse;

namespace {

FrameSeries make_series(const ModelSpec& spec, const StateVector& psi0, double t1,
                        int n, GaugeConvention gauge = {}) {
    const TimeGrid grid{0.0, t1, n, 1e-5 * t1};
    return track(sample_trajectory(spec, psi0, grid), gauge);
}

FrameSeries exchange_series(GaugeConvention gauge = {}) {
    const ModelSpec spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    return make_series(spec, basis_product_state(spec.shape, 1, 0), 10.0, 41,
                       gauge);
}

}  // namespace

TEST_CASE("exchange energies follow the closed form") {
    const FrameSeries s = exchange_series();
    const ModelOperators ops = assemble_operators(s.model);
    for (int i = 0; i < 41; ++i) {
        const auto e1 = effective_hamiltonian(s, 1, i);
        const auto e2 = effective_hamiltonian(s, 2, i);
        const double u1 = local_energy(s.at[i], e1);
        const double u2 = local_energy(s.at[i], e2);
        const double u0 =
            total_energy(reconstruct_state(s.at[i], s.model.shape), ops.h0);
        // U1(t) = (omega/2) cos(2 g t), U0 = 0 for the |1,0> start
        const double expected = 0.5 * std::cos(0.2 * s.at[i].time);
        CHECK(std::abs(u1 - expected) < 1e-7);
        CHECK(std::abs(u0) < 1e-12);
        CHECK(additivity_residual(u0, u1, u2) < 1e-8);
    }
}

TEST_CASE("resonant exchange keeps the effective Hamiltonian bare") {
    // equal splittings: the Schmidt directions are static, so the bare
    // parallel transport reproduces H1 and H2 exactly
    const FrameSeries s = exchange_series();
    for (int i = 0; i < 41; ++i) {
        const auto e1 = effective_hamiltonian(s, 1, i);
        if (e1.occupied_only) continue;
        CHECK((e1.h_tilde.matrix - s.model.h1.matrix).norm() < 1e-8);
    }
}

TEST_CASE("split reassembles and matches the projection method") {
    const ModelSpec spec = preset_random_dense(2, 2, 1.0, 42);
    Vector a = Vector::Zero(4);
    a(0) = 0.6;
    a(3) = 0.8;
    const FrameSeries s =
        make_series(spec, make_state(a, spec.shape), 2.0, 21);
    for (int i = 0; i < 21; ++i) {
        for (int k : {1, 2}) {
            auto eff = effective_hamiltonian(s, k, i);
            REQUIRE(!eff.occupied_only);
            eff = split_effective(std::move(eff), spec);
            const Operator& bare = k == 1 ? spec.h1 : spec.h2;
            CHECK((eff.h_tilde.matrix - bare.matrix - eff.h_ls.matrix -
                   eff.h_x.matrix)
                      .norm() < 1e-12);
            CHECK((eff.h_ls.matrix * bare.matrix - bare.matrix * eff.h_ls.matrix)
                      .norm() < 1e-10);
            const ProjectionSplit proj = lamb_shift_from_projections(s, k, i);
            CHECK((eff.h_ls.matrix - proj.h_ls.matrix).norm() < 1e-6);
            CHECK((eff.h_x.matrix - proj.h_x.matrix).norm() < 1e-6);
        }
    }
}

TEST_CASE("split refuses occupied-only generators") {
    const ModelSpec spec = preset_random_dense(2, 3, 1.0, 7);
    const FrameSeries s =
        make_series(spec, basis_product_state(spec.shape, 0, 1), 1.0, 5);
    auto eff = effective_hamiltonian(s, 2, 2);
    CHECK(eff.occupied_only);
    CHECK_THROWS_AS(split_effective(std::move(eff), spec), Error);
}

TEST_CASE("master equation closes with the Schmidt-diagonal dissipator") {
    const ModelSpec spec = preset_random_dense(2, 2, 1.0, 42);
    Vector a = Vector::Zero(4);
    a(0) = 0.6;
    a(3) = 0.8;
    const FrameSeries s = make_series(spec, make_state(a, spec.shape), 2.0, 21);
    for (int i = 0; i < 21; ++i) {
        for (int k : {1, 2}) {
            CHECK(master_equation_residual(s, k, i) < 1e-7);
            const Operator d = dissipator(s, k, i);
            CHECK(std::abs(d.matrix.trace()) < 1e-10);
            const Matrix& basis = k == 1 ? s.at[i].basis1 : s.at[i].basis2;
            Matrix in_basis = basis.adjoint() * d.matrix * basis;
            in_basis.diagonal().setZero();
            CHECK(in_basis.norm() < 1e-10);
        }
    }
}

TEST_CASE("dissipator weights are the lambda-squared rates") {
    const FrameSeries s = exchange_series();
    const int i = 10;
    const double t = s.at[i].time;
    const Operator d = dissipator(s, 1, i);
    // d lambda_1^2/dt = -0.1 sin(0.2 t) for the exchange model
    const Complex w =
        s.at[i].basis1.col(0).dot(d.matrix * s.at[i].basis1.col(0));
    const double expected = -0.1 * std::sin(0.2 * t);
    CHECK(std::abs(w - Complex(0.0, expected)) < 1e-7);
}

TEST_CASE("zero-diagonal gauge empties the generator diagonal") {
    const FrameSeries s = exchange_series(GaugeConvention{GaugeKind::ZeroDiagonal});
    for (int i = 0; i < 41; ++i) {
        const auto eff = effective_hamiltonian(s, 1, i);
        for (int j = 0; j < s.at[i].lambdas.size(); ++j) {
            if (s.at[i].lambdas(j) <= 1e-8) continue;
            const Complex diag = s.at[i].basis1.col(j).dot(
                eff.h_tilde.matrix * s.at[i].basis1.col(j));
            CHECK(std::abs(diag) < 1e-8);
        }
    }
}

TEST_CASE("gauge transform obeys the generator and energy shift laws") {
    const FrameSeries s = exchange_series();

    const GaugeSpec linear = GaugeSpec::uniform_linear(2, 0.1, 0.25);
    const GaugeCheckReport rep = gauge_transform_check(s, linear);
    CHECK(rep.generator_shift_max < 1e-6);
    CHECK(rep.energy_shift_max < 1e-6);
    CHECK(rep.sum_invariance_max < 1e-8);

    std::vector<double> times;
    RealMatrix values(501, 2);
    for (int i = 0; i < 501; ++i) {
        const double t = -1.0 + 12.0 * i / 500.0;
        times.push_back(t);
        values(i, 0) = 0.25 * t;
        values(i, 1) = -0.1 * t + 0.02 * std::sin(t);
    }
    const GaugeCheckReport tab =
        gauge_transform_check(s, GaugeSpec::from_table(times, values));
    CHECK(tab.generator_shift_max < 1e-6);
    CHECK(tab.energy_shift_max < 1e-6);
    CHECK(tab.sum_invariance_max < 1e-8);
}

TEST_CASE("mixed gauges are rejected in local_energy") {
    const FrameSeries s = exchange_series();
    const FrameSeries gauged = apply_gauge(s, GaugeSpec::uniform_linear(2, 0.0, 0.3));
    const auto eff = effective_hamiltonian(gauged, 1, 3);
    CHECK_THROWS_AS(local_energy(s.at[3], eff), Error);
}

TEST_CASE("energy records carry consistent fields") {
    const FrameSeries s = exchange_series();
    const ModelOperators ops = assemble_operators(s.model);
    const auto e1 = effective_hamiltonian(s, 1, 5);
    const auto e2 = effective_hamiltonian(s, 2, 5);
    const EnergyRecord rec = energy_record(s, e1, e2, s.model, ops, 5);
    CHECK(rec.time == s.at[5].time);
    CHECK(std::abs(rec.u0 - rec.e1_bare - rec.e2_bare - rec.e_int) < 1e-12);
    CHECK(rec.additivity_residual < 1e-8);
    CHECK(rec.entropy == doctest::Approx(entanglement_entropy(s.at[5])));
}
