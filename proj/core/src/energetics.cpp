#include "qse/energetics.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace qse {

namespace {

std::atomic<int> next_gauge_id_gauged{1 << 20};

void check_index(const FrameSeries& series, int t_index) {
    if (t_index < 0 || t_index >= static_cast<int>(series.at.size()))
        fail(ErrorKind::Usage, "time index out of range");
}

const Matrix& basis_of(const SchmidtFrame& frame, int k) {
    if (k != 1 && k != 2) fail(ErrorKind::Usage, "subsystem index must be 1 or 2");
    return k == 1 ? frame.basis1 : frame.basis2;
}

}  // namespace

EffectiveHamiltonian effective_hamiltonian(const FrameSeries& series, int k,
                                           int t_index, const Tolerances& tol) {
    check_index(series, t_index);
    const SchmidtFrame& fm = series.minus[t_index];
    const SchmidtFrame& f0 = series.at[t_index];
    const SchmidtFrame& fp = series.plus[t_index];
    if (!fm.aligned || !f0.aligned || !fp.aligned)
        fail(ErrorKind::Usage, "effective_hamiltonian requires aligned frames");

    const double delta = series.grid.effective_substep();
    const double hbar = series.model.hbar;
    Matrix b0 = basis_of(f0, k);
    Matrix bp = basis_of(fp, k);
    Matrix bm = basis_of(fm, k);

    // Columns whose Schmidt coefficient vanishes carry no weight but are
    // non-differentiable where the coefficient crosses zero, so the
    // generator is restricted to the occupied columns.
    const int occupied =
        static_cast<int>((f0.lambdas.array() > tol.rank_tol).count());
    if (occupied < b0.cols()) {
        Matrix c0(b0.rows(), occupied), cp(b0.rows(), occupied),
            cm(b0.rows(), occupied);
        int next = 0;
        for (int j = 0; j < f0.lambdas.size(); ++j) {
            if (f0.lambdas(j) <= tol.rank_tol) continue;
            c0.col(next) = b0.col(j);
            cp.col(next) = bp.col(j);
            cm.col(next) = bm.col(j);
            ++next;
        }
        b0 = std::move(c0);
        bp = std::move(cp);
        bm = std::move(cm);
    }

    const Matrix bdot = (bp - bm) / (2.0 * delta);
    const Matrix raw = Complex(0.0, hbar) * bdot * b0.adjoint();

    // The stencil-quality diagnostic lives in the occupied block: when the
    // occupied subspace is a proper subspace its own rotation makes the raw
    // generator non-Hermitian at O(1), which is structural, not numerical.
    const double block_asymmetry =
        hermitian_asymmetry(b0.adjoint() * raw * b0);
    if (block_asymmetry > tol.asymmetry_limit)
        fail(ErrorKind::Numeric,
             "effective Hamiltonian stencil quality too poor (asymmetry " +
                 std::to_string(block_asymmetry) + ")",
             block_asymmetry);

    Hermitized herm = hermitize(Operator{raw, false});

    EffectiveHamiltonian eff;
    eff.subsystem = k;
    eff.time = f0.time;
    eff.h_tilde = std::move(herm.h);
    eff.asymmetry = block_asymmetry;
    eff.occupied_only = f0.rank < series.model.shape.dim(k);
    eff.gauge_id = series.gauge_id;
    return eff;
}

EffectiveHamiltonian split_effective(EffectiveHamiltonian eff, const ModelSpec& spec) {
    if (eff.occupied_only)
        fail(ErrorKind::Usage,
             "split_effective is undefined for occupied-only effective Hamiltonians");
    const Operator& bare = eff.subsystem == 1 ? spec.h1 : spec.h2;
    if (bare.dim() != eff.h_tilde.dim())
        fail(ErrorKind::Dimension, "bare Hamiltonian dimension mismatch");

    const Spectral s = spectral_decompose(bare);
    const Matrix delta_bare =
        s.eigenvectors.adjoint() * (eff.h_tilde.matrix - bare.matrix) * s.eigenvectors;

    // block-diagonal within degenerate bare eigenspaces
    const int n = bare.dim();
    const double gap_tol =
        1e-8 * std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
    Matrix ls = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(s.eigenvalues(i) - s.eigenvalues(j)) <= gap_tol)
                ls(i, j) = delta_bare(i, j);
    const Matrix x = delta_bare - ls;

    eff.h_ls = Operator{s.eigenvectors * ls * s.eigenvectors.adjoint(), true};
    eff.h_x = Operator{s.eigenvectors * x * s.eigenvectors.adjoint(), true};
    eff.split_done = true;
    return eff;
}

ProjectionSplit lamb_shift_from_projections(const FrameSeries& series, int k,
                                            int t_index) {
    check_index(series, t_index);
    const int dk = series.model.shape.dim(k);
    const SchmidtFrame& f0 = series.at[t_index];
    if (f0.rank < dk)
        fail(ErrorKind::Usage,
             "projection split requires full Schmidt rank for subsystem " +
                 std::to_string(k));

    const double hbar = series.model.hbar;
    const double delta = series.grid.effective_substep();
    const Operator& bare = k == 1 ? series.model.h1 : series.model.h2;
    const Spectral s = spectral_decompose(bare);

    // r_jl(tau) = <b_j|phi_l(tau)> e^{+i b_j tau / hbar}, time origin t0 = 0
    auto projections = [&](const SchmidtFrame& f) {
        Matrix r = s.eigenvectors.adjoint() * basis_of(f, k);
        for (int j = 0; j < dk; ++j)
            r.row(j) *= std::exp(Complex(0.0, s.eigenvalues(j) * f.time / hbar));
        return r;
    };
    const Matrix r0 = projections(f0);
    const Matrix rdot =
        (projections(series.plus[t_index]) - projections(series.minus[t_index])) /
        (2.0 * delta);

    Matrix ls = Matrix::Zero(dk, dk);
    Matrix x = Matrix::Zero(dk, dk);
    for (int j = 0; j < dk; ++j) {
        for (int m = 0; m < dk; ++m) {
            Complex acc = 0.0;
            for (int l = 0; l < dk; ++l) acc += rdot(j, l) * std::conj(r0(m, l));
            if (j == m) {
                ls(j, j) = Complex(0.0, hbar) * acc;
            } else {
                x(j, m) = Complex(0.0, hbar) * acc *
                          std::exp(Complex(
                              0.0, (s.eigenvalues(m) - s.eigenvalues(j)) * f0.time / hbar));
            }
        }
    }

    const Matrix v = s.eigenvectors;
    ProjectionSplit out;
    out.h_ls = hermitize(Operator{v * ls * v.adjoint(), false}).h;
    out.h_x = hermitize(Operator{v * x * v.adjoint(), false}).h;
    return out;
}

double total_energy(const StateVector& psi, const Operator& h0) {
    const Complex e = psi.amplitudes.dot(h0.matrix * psi.amplitudes);
    if (std::abs(e.imag()) > 1e-12)
        fail(ErrorKind::Numeric, "energy expectation has imaginary residue " +
                                     std::to_string(e.imag()),
             std::abs(e.imag()));
    return e.real();
}

double total_energy(const StateVector& psi, const ModelSpec& spec) {
    return total_energy(psi, build_total_hamiltonian(spec));
}

double local_energy(const SchmidtFrame& frame, const EffectiveHamiltonian& eff) {
    if (frame.gauge_id != eff.gauge_id)
        fail(ErrorKind::Usage, "frame and effective Hamiltonian use different gauges");
    const Matrix& basis = basis_of(frame, eff.subsystem);
    if (basis.rows() != eff.h_tilde.dim())
        fail(ErrorKind::Dimension, "frame/effective Hamiltonian dimension mismatch");
    double u = 0.0;
    for (int j = 0; j < frame.lambdas.size(); ++j) {
        const double w = frame.lambdas(j) * frame.lambdas(j);
        const Complex diag = basis.col(j).dot(eff.h_tilde.matrix * basis.col(j));
        u += w * diag.real();
    }
    return u;
}

double additivity_residual(double u0, double u1, double u2) {
    return std::abs(u0 - u1 - u2);
}

Operator dissipator(const FrameSeries& series, int k, int t_index) {
    check_index(series, t_index);
    const SchmidtFrame& fm = series.minus[t_index];
    const SchmidtFrame& f0 = series.at[t_index];
    const SchmidtFrame& fp = series.plus[t_index];
    const double delta = series.grid.effective_substep();
    const double hbar = series.model.hbar;

    const Matrix& basis = basis_of(f0, k);
    Matrix d = Matrix::Zero(basis.rows(), basis.rows());
    for (int j = 0; j < f0.lambdas.size(); ++j) {
        const double wdot = (fp.lambdas(j) * fp.lambdas(j) -
                             fm.lambdas(j) * fm.lambdas(j)) /
                            (2.0 * delta);
        d += Complex(0.0, hbar * wdot) * (basis.col(j) * basis.col(j).adjoint());
    }
    return Operator{std::move(d), false};
}

double master_equation_residual(const FrameSeries& series, int k, int t_index,
                                const Tolerances& tol) {
    check_index(series, t_index);
    const double delta = series.grid.effective_substep();
    const double hbar = series.model.hbar;
    const Matrix rho_m = density_from_frame(series.minus[t_index], k);
    const Matrix rho_0 = density_from_frame(series.at[t_index], k);
    const Matrix rho_p = density_from_frame(series.plus[t_index], k);

    const EffectiveHamiltonian eff = effective_hamiltonian(series, k, t_index, tol);
    const Operator d = dissipator(series, k, t_index);

    const Matrix lhs = Complex(0.0, hbar) * (rho_p - rho_m) / (2.0 * delta);
    const Matrix rhs = eff.h_tilde.matrix * rho_0 - rho_0 * eff.h_tilde.matrix +
                       d.matrix;
    return (lhs - rhs).norm();
}

GaugeSpec GaugeSpec::linear(std::vector<double> offsets, std::vector<double> rates) {
    if (offsets.size() != rates.size())
        fail(ErrorKind::Usage, "gauge offsets/rates size mismatch");
    GaugeSpec g;
    g.offsets = std::move(offsets);
    g.rates = std::move(rates);
    return g;
}

GaugeSpec GaugeSpec::uniform_linear(int count, double offset, double rate) {
    return linear(std::vector<double>(count, offset), std::vector<double>(count, rate));
}

GaugeSpec GaugeSpec::from_table(std::vector<double> times, RealMatrix values) {
    if (times.size() < 2)
        fail(ErrorKind::Usage, "tabulated gauge needs at least two samples");
    if (static_cast<int>(times.size()) != values.rows())
        fail(ErrorKind::Usage, "tabulated gauge times/values size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            fail(ErrorKind::Usage, "tabulated gauge times must be ascending");
    GaugeSpec g;
    g.tabulated = true;
    g.times = std::move(times);
    g.values = std::move(values);
    return g;
}

int GaugeSpec::index_count() const {
    return tabulated ? static_cast<int>(values.cols())
                     : static_cast<int>(offsets.size());
}

namespace {

// segment index i with times[i] <= t <= times[i+1], clamped at the ends
std::size_t segment_of(const std::vector<double>& times, double t) {
    if (t <= times.front()) return 0;
    if (t >= times.back()) return times.size() - 2;
    std::size_t lo = 0, hi = times.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (times[mid] <= t ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

double GaugeSpec::theta(int j, double t) const {
    if (!tabulated) return offsets[j] + rates[j] * t;
    const std::size_t i = segment_of(times, t);
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * values(i, j) + w * values(i + 1, j);
}

double GaugeSpec::theta_dot(int j, double t) const {
    if (!tabulated) return rates[j];
    // finite-difference rate: central across the neighbouring samples for
    // interior points, one-sided at the ends
    const std::size_t i = segment_of(times, t);
    std::size_t lo = i, hi = i + 1;
    if (t > times[i] + 1e-300 && t < times[i + 1]) {
        // strictly inside a segment: use its slope
    } else if (i > 0 && std::abs(t - times[i]) <= std::abs(t - times[i + 1])) {
        lo = i - 1;
        hi = i + 1;
    }
    return (values(hi, j) - values(lo, j)) / (times[hi] - times[lo]);
}

FrameSeries apply_gauge(const FrameSeries& series, const GaugeSpec& g) {
    const int d1 = series.model.shape.d1;
    if (g.index_count() != d1)
        fail(ErrorKind::Usage, "gauge index count does not match d1");

    FrameSeries out = series;
    out.gauge_id = next_gauge_id_gauged.fetch_add(1);
    auto transform = [&](SchmidtFrame& frame) {
        for (int j = 0; j < d1; ++j) {
            const Complex phase = std::exp(Complex(0.0, g.theta(j, frame.time)));
            frame.basis1.col(j) *= phase;
            frame.basis2.col(j) /= phase;
        }
        frame.gauge_id = out.gauge_id;
    };
    for (auto* list : {&out.at, &out.minus, &out.plus})
        for (auto& frame : *list) transform(frame);
    return out;
}

GaugeCheckReport gauge_transform_check(const FrameSeries& series, const GaugeSpec& g,
                                       const Tolerances& tol) {
    const FrameSeries gauged = apply_gauge(series, g);
    const double hbar = series.model.hbar;
    const double delta = series.grid.effective_substep();
    GaugeCheckReport report;

    for (int i = 0; i < static_cast<int>(series.at.size()); ++i) {
        const SchmidtFrame& f0 = series.at[i];
        const double t = f0.time;
        // discrete rates consistent with the stencil the frames carry
        RealVector rate(f0.lambdas.size());
        for (int j = 0; j < rate.size(); ++j)
            rate(j) = (g.theta(j, t + delta) - g.theta(j, t - delta)) / (2.0 * delta);

        double u_shift[3] = {0.0, 0.0, 0.0};  // index by subsystem
        for (int k : {1, 2}) {
            const EffectiveHamiltonian eff = effective_hamiltonian(series, k, i, tol);
            const EffectiveHamiltonian effp = effective_hamiltonian(gauged, k, i, tol);
            const double sign = k == 1 ? -1.0 : 1.0;

            const Matrix& basis = basis_of(f0, k);
            Matrix expected = Matrix::Zero(basis.rows(), basis.rows());
            for (int j = 0; j < rate.size(); ++j) {
                // unoccupied columns are excluded from the generators
                if (f0.lambdas(j) <= tol.rank_tol) continue;
                expected += Complex(sign * hbar * rate(j), 0.0) *
                            (basis.col(j) * basis.col(j).adjoint());
            }
            report.generator_shift_max =
                std::max(report.generator_shift_max,
                         (effp.h_tilde.matrix - eff.h_tilde.matrix - expected).norm());

            const double u = local_energy(f0, eff);
            const double up = local_energy(gauged.at[i], effp);
            double expected_u = 0.0;
            for (int j = 0; j < rate.size(); ++j)
                expected_u +=
                    sign * hbar * f0.lambdas(j) * f0.lambdas(j) * rate(j);
            report.energy_shift_max =
                std::max(report.energy_shift_max, std::abs(up - u - expected_u));
            u_shift[k] = up - u;
        }
        report.sum_invariance_max =
            std::max(report.sum_invariance_max, std::abs(u_shift[1] + u_shift[2]));
    }
    return report;
}

ModelOperators assemble_operators(const ModelSpec& spec) {
    ModelOperators ops;
    ops.h1_full = kron(spec.h1, identity_operator(spec.shape.d2));
    ops.h2_full = kron(identity_operator(spec.shape.d1), spec.h2);
    ops.h0 = Operator{ops.h1_full.matrix + ops.h2_full.matrix + spec.h_int.matrix, true};
    return ops;
}

EnergyRecord energy_record(const FrameSeries& series, const EffectiveHamiltonian& eff1,
                           const EffectiveHamiltonian& eff2, const ModelSpec& spec,
                           const ModelOperators& ops, int t_index,
                           const Tolerances& tol) {
    check_index(series, t_index);
    const SchmidtFrame& frame = series.at[t_index];
    if (eff1.gauge_id != series.gauge_id || eff2.gauge_id != series.gauge_id)
        fail(ErrorKind::Usage, "effective Hamiltonians from a different gauge");

    const StateVector psi = reconstruct_state(frame, spec.shape);

    EnergyRecord rec;
    rec.time = frame.time;
    rec.u0 = total_energy(psi, ops.h0);
    rec.u1 = local_energy(frame, eff1);
    rec.u2 = local_energy(frame, eff2);
    rec.e1_bare = total_energy(psi, ops.h1_full);
    rec.e2_bare = total_energy(psi, ops.h2_full);
    rec.e_int = total_energy(psi, spec.h_int);
    rec.additivity_residual = additivity_residual(rec.u0, rec.u1, rec.u2);
    rec.master_residual_1 = master_equation_residual(series, 1, t_index, tol);
    rec.master_residual_2 = master_equation_residual(series, 2, t_index, tol);
    rec.entropy = entanglement_entropy(frame);
    return rec;
}

}  // namespace qse
