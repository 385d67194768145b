#include "qse/models.hpp"

#include <random>

namespace qse {

void validate_model(const ModelSpec& spec) {
    if (spec.h1.dim() != spec.shape.d1)
        fail(ErrorKind::Model, "h1 dimension does not match d1");
    if (spec.h2.dim() != spec.shape.d2)
        fail(ErrorKind::Model, "h2 dimension does not match d2");
    if (spec.h_int.dim() != spec.shape.total())
        fail(ErrorKind::Model, "h_int dimension does not match d1*d2");
    if (spec.hbar <= 0.0)
        fail(ErrorKind::Model, "hbar must be positive");
    const std::pair<const Operator*, const char*> named[] = {
        {&spec.h1, "h1"}, {&spec.h2, "h2"}, {&spec.h_int, "h_int"}};
    for (const auto& [op, name] : named) {
        const double asym = hermitian_asymmetry(op->matrix);
        if (asym > 1e-10)
            fail(ErrorKind::Model,
                 std::string(name) + " is not Hermitian (asymmetry " +
                     std::to_string(asym) + ")",
                 asym);
    }
}

Operator build_total_hamiltonian(const ModelSpec& spec) {
    validate_model(spec);
    Matrix h0 = kron(spec.h1, identity_operator(spec.shape.d2)).matrix +
                kron(identity_operator(spec.shape.d1), spec.h2).matrix +
                spec.h_int.matrix;
    return Operator{std::move(h0), true};
}

ModelSpec preset_exchange_qubits(double omega1, double omega2, double g) {
    Matrix splitting(2, 2);
    splitting << -0.5, 0.0, 0.0, 0.5;  // |1> is the excited level

    Matrix h_int = Matrix::Zero(4, 4);
    // sigma+ ⊗ sigma- couples |1,0> (flat index 2) and |0,1> (flat index 1)
    h_int(2, 1) = g;
    h_int(1, 2) = g;

    ModelSpec spec;
    spec.shape = BipartiteShape(2, 2);
    spec.h1 = make_operator(omega1 * splitting, true);
    spec.h2 = make_operator(omega2 * splitting, true);
    spec.h_int = make_operator(std::move(h_int), true);
    spec.label = "exchange_qubits";
    return spec;
}

namespace {

Matrix gaussian_hermitian(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = Complex(gauss(rng), gauss(rng));
    Matrix h = (a + a.adjoint()) / 2.0;
    // unit spectral scale
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (scale > 0.0) h /= scale;
    return h;
}

}  // namespace

ModelSpec preset_random_dense(int d1, int d2, double strength, std::uint64_t seed) {
    if (d1 > d2)
        fail(ErrorKind::Model, "random preset requires d1 <= d2");
    std::mt19937_64 rng(seed);
    ModelSpec spec;
    spec.shape = BipartiteShape(d1, d2);
    spec.h1 = make_operator(gaussian_hermitian(d1, rng), true);
    spec.h2 = make_operator(gaussian_hermitian(d2, rng), true);
    if (strength == 0.0) {
        spec.h_int = make_operator(Matrix::Zero(d1 * d2, d1 * d2), true);
    } else {
        spec.h_int = make_operator(strength * gaussian_hermitian(d1 * d2, rng), true);
    }
    spec.label = "random_dense";
    return spec;
}

}  // namespace qse
