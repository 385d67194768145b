#include <cmath>
#include <random>

#include "doctest.h"
#include "qse/schmidt.hpp"

using namespace qse;

namespace {

StateVector seeded_state(const BipartiteShape& shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector amps(shape.total());
    for (int i = 0; i < amps.size(); ++i)
        amps(i) = Complex(gauss(rng), gauss(rng));
    amps /= amps.norm();
    return make_state(std::move(amps), shape);
}

FrameSeries exchange_series(GaugeConvention gauge = {}) {
    const ModelSpec spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    const StateVector psi0 = basis_product_state(spec.shape, 1, 0);
    const TimeGrid grid{0.0, 10.0, 41, 1e-4};
    return track(sample_trajectory(spec, psi0, grid), gauge);
}

}  // namespace

TEST_CASE("decomposition invariants on random states") {
    for (const BipartiteShape shape : {BipartiteShape(2, 2), BipartiteShape(2, 3),
                                       BipartiteShape(3, 3)}) {
        const StateVector psi = seeded_state(shape, 7 + shape.d2);
        const SchmidtFrame f = schmidt_decompose(psi);
        REQUIRE(f.lambdas.size() == shape.d1);
        CHECK((reconstruct_state(f, shape).amplitudes - psi.amplitudes).norm() <
              1e-13);
        CHECK((f.basis1.adjoint() * f.basis1 -
               Matrix::Identity(shape.d1, shape.d1))
                  .norm() < 1e-13);
        CHECK((f.basis2.adjoint() * f.basis2 -
               Matrix::Identity(shape.d1, shape.d1))
                  .norm() < 1e-13);
        CHECK(f.lambdas.minCoeff() >= 0.0);
        CHECK(std::abs(f.lambdas.squaredNorm() - 1.0) < 1e-13);
        // raw frames come out in descending singular-value order
        for (int j = 1; j < shape.d1; ++j) CHECK(f.lambdas(j - 1) >= f.lambdas(j));
    }
}

TEST_CASE("lambda spectrum equals both reduced density spectra") {
    const BipartiteShape shape(2, 3);
    const StateVector psi = seeded_state(shape, 21);
    const SchmidtFrame f = schmidt_decompose(psi);
    const Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    const auto s1 = spectral_decompose(partial_trace(Operator{rho, true}, shape, 1));
    for (int j = 0; j < shape.d1; ++j)
        CHECK(std::abs(f.lambdas(j) * f.lambdas(j) -
                       s1.eigenvalues(shape.d1 - 1 - j)) < 1e-13);
}

TEST_CASE("entropy limits") {
    const BipartiteShape shape(2, 2);
    const SchmidtFrame product = schmidt_decompose(basis_product_state(shape, 0, 1));
    CHECK(entanglement_entropy(product) == doctest::Approx(0.0).epsilon(1e-12));

    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const SchmidtFrame f = schmidt_decompose(make_state(bell, shape));
    CHECK(entanglement_entropy(f) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("tracked series stays continuous") {
    const FrameSeries s = exchange_series();
    for (std::size_t i = 1; i < s.at.size(); ++i) {
        CHECK(s.at[i].aligned);
        CHECK(s.at[i].gauge_id == s.gauge_id);
        for (int j = 0; j < s.at[i].lambdas.size(); ++j) {
            // zero-weight columns carry an arbitrary completion phase on
            // the partner side; continuity only holds where lambda > 0
            if (s.at[i].lambdas(j) <= 1e-8 || s.at[i - 1].lambdas(j) <= 1e-8)
                continue;
            CHECK((s.at[i].basis1.col(j) - s.at[i - 1].basis1.col(j)).norm() < 0.5);
            CHECK((s.at[i].basis2.col(j) - s.at[i - 1].basis2.col(j)).norm() < 0.5);
        }
    }
    // stencil frames hug their grid frame
    for (std::size_t i = 0; i < s.at.size(); ++i) {
        CHECK((s.plus[i].basis1 - s.at[i].basis1).norm() < 1e-2);
        CHECK((s.minus[i].basis1 - s.at[i].basis1).norm() < 1e-2);
    }
}

TEST_CASE("tracking is deterministic") {
    const FrameSeries a = exchange_series();
    const FrameSeries b = exchange_series();
    for (std::size_t i = 0; i < a.at.size(); ++i) {
        CHECK((a.at[i].basis1 - b.at[i].basis1).norm() == 0.0);
        CHECK((a.at[i].basis2 - b.at[i].basis2).norm() == 0.0);
        CHECK((a.at[i].lambdas - b.at[i].lambdas).norm() == 0.0);
    }
}

TEST_CASE("degenerate Schmidt values are tracked without jumps") {
    // the bell state keeps lambda_1 = lambda_2 exactly under this model
    const ModelSpec spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const StateVector psi0 = make_state(bell, spec.shape);
    const TimeGrid grid{0.0, 5.0, 21, 1e-4};
    const FrameSeries s = track(sample_trajectory(spec, psi0, grid));
    for (std::size_t i = 1; i < s.at.size(); ++i)
        CHECK((s.at[i].basis1 - s.at[i - 1].basis1).norm() < 0.5);
}

TEST_CASE("linear shift gauge changes phases only") {
    const FrameSeries bare = exchange_series();
    const FrameSeries shifted =
        exchange_series(GaugeConvention{GaugeKind::LinearShift, 0.4});
    const BipartiteShape shape(2, 2);
    for (std::size_t i = 0; i < bare.at.size(); ++i) {
        CHECK((reconstruct_state(shifted.at[i], shape).amplitudes -
               reconstruct_state(bare.at[i], shape).amplitudes)
                  .norm() < 1e-12);
        for (int j = 0; j < 2; ++j) {
            const Complex c =
                bare.at[i].basis1.col(j).dot(shifted.at[i].basis1.col(j));
            CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);
        }
    }
    CHECK(bare.gauge_id != shifted.gauge_id);
}

TEST_CASE("reconstruction and density agree") {
    const FrameSeries s = exchange_series();
    const SchmidtFrame& f = s.at[10];
    const StateVector psi = reconstruct_state(f, s.model.shape);
    const Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    const Matrix rho1 = partial_trace(Operator{rho, true}, s.model.shape, 1).matrix;
    CHECK((density_from_frame(f, 1) - rho1).norm() < 1e-12);
}
