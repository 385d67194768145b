#include "qse/schmidt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <string>

#include "qse/assignment.hpp"

namespace qse {

namespace {

std::atomic<int> next_gauge_id{1};

int count_rank(const RealVector& lambdas, double rank_tol) {
    int rank = 0;
    for (int j = 0; j < lambdas.size(); ++j)
        if (lambdas(j) > rank_tol) ++rank;
    return rank;
}

// An anchor sitting exactly on a lambda degeneracy has arbitrary SVD
// directions inside the degenerate block, while the nearby stencil frames
// resolve the physical ones. Rotate each anchor block toward the forward
// stencil frame so the derivative chain starts smooth.
void orient_anchor_blocks(SchmidtFrame& anchor, const SchmidtFrame& forward,
                          double degeneracy_tol, double rank_tol) {
    const int n = static_cast<int>(anchor.lambdas.size());
    if (n < 2) return;
    const double block_tol =
        degeneracy_tol * std::max(anchor.lambdas.maxCoeff(), 1e-300);

    std::vector<int> cluster(n);
    for (int j = 0; j < n; ++j) cluster[j] = j;
    auto root = [&](int j) {
        while (cluster[j] != j) j = cluster[j] = cluster[cluster[j]];
        return j;
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::abs(anchor.lambdas(a) - anchor.lambdas(b)) <= block_tol)
                cluster[root(b)] = root(a);

    for (int a = 0; a < n; ++a) {
        if (root(a) != a) continue;
        std::vector<int> members;
        for (int b = 0; b < n; ++b)
            if (root(b) == a && anchor.lambdas(b) > rank_tol) members.push_back(b);
        if (members.size() < 2) continue;
        const int len = static_cast<int>(members.size());
        Matrix block1(anchor.basis1.rows(), len);
        Matrix block2(anchor.basis2.rows(), len);
        Matrix target(forward.basis1.rows(), len);
        for (int c = 0; c < len; ++c) {
            block1.col(c) = anchor.basis1.col(members[c]);
            block2.col(c) = anchor.basis2.col(members[c]);
        }
        // the forward columns living in the block's subspace, by projection
        std::vector<std::pair<double, int>> weight;
        for (int p = 0; p < n; ++p)
            weight.push_back({(block1.adjoint() * forward.basis1.col(p)).norm(), p});
        std::sort(weight.begin(), weight.end(),
                  [](const auto& x, const auto& y) { return x.first > y.first; });
        std::vector<int> picked;
        for (int c = 0; c < len; ++c) picked.push_back(weight[c].second);
        std::sort(picked.begin(), picked.end());
        for (int c = 0; c < len; ++c) target.col(c) = forward.basis1.col(picked[c]);

        const Matrix m = block1.adjoint() * target;
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
        block1 *= w;
        block2 *= w.conjugate();
        for (int c = 0; c < len; ++c) {
            anchor.basis1.col(members[c]) = block1.col(c);
            anchor.basis2.col(members[c]) = block2.col(c);
        }
    }
}

}  // namespace

SchmidtFrame schmidt_decompose(const StateVector& psi, double rank_tol) {
    const Matrix c = coefficient_matrix(psi);
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        fail(ErrorKind::Numeric, "SVD of coefficient matrix failed");

    // C = U S V^H = U S conj(V)^T  ->  basis1 = U, basis2 = conj(V)
    SchmidtFrame frame;
    frame.time = psi.time;
    frame.lambdas = svd.singularValues();
    frame.basis1 = svd.matrixU();
    frame.basis2 = svd.matrixV().conjugate();
    const Vector phases = fix_column_phases(frame.basis1);
    for (int j = 0; j < frame.basis2.cols(); ++j)
        frame.basis2.col(j) *= phases(j);
    frame.rank = count_rank(frame.lambdas, rank_tol);
    return frame;
}

SchmidtFrame align_frame(const SchmidtFrame& prev, SchmidtFrame raw,
                         const ModelSpec& spec, double dt, GaugeConvention gauge,
                         double degeneracy_tol, double rank_tol) {
    if (!prev.aligned)
        fail(ErrorKind::Usage, "align_frame requires an aligned predecessor");
    const int n = static_cast<int>(raw.lambdas.size());

    // Reference propagator for the phase step: bare subsystem-1 evolution,
    // or the identity for the ZeroDiagonal gauge.
    Matrix reference;
    if (gauge.kind == GaugeKind::ZeroDiagonal) {
        reference = prev.basis1;
    } else {
        const Spectral s1 = spectral_decompose(spec.h1);
        reference = unitary_from_spectral(s1, dt, spec.hbar) * prev.basis1;
    }

    // (1) ordering: permutation maximizing total overlap magnitude
    const Matrix overlaps = prev.basis1.adjoint() * raw.basis1;
    std::vector<int> perm;
    if (n == 1) {
        perm = {0};
    } else {
        RealMatrix cost = -overlaps.cwiseAbs();
        perm = solve_assignment(cost);
        // flag exact ties that the lowest-index preference resolved
        for (int a = 0; a < n; ++a) {
            int ties = 0;
            for (int b = 0; b < n; ++b)
                if (cost(a, b) == cost(a, perm[a])) ++ties;
            if (ties > 1)
                std::cerr << "qse: warning: ambiguous Schmidt assignment at t="
                          << raw.time << ", using lowest-index preference\n";
        }
    }

    SchmidtFrame out;
    out.time = raw.time;
    out.lambdas = RealVector(n);
    out.basis1 = Matrix(raw.basis1.rows(), n);
    out.basis2 = Matrix(raw.basis2.rows(), n);
    for (int j = 0; j < n; ++j) {
        out.lambdas(j) = raw.lambdas(perm[j]);
        out.basis1.col(j) = raw.basis1.col(perm[j]);
        out.basis2.col(j) = raw.basis2.col(perm[j]);
    }

    // (2) degenerate blocks: closest-unitary rotation toward prev, inverse
    // applied to basis2 so the reconstruction is preserved
    const double lambda_max = out.lambdas.size() > 0 ? out.lambdas.maxCoeff() : 0.0;
    const double block_tol = degeneracy_tol * std::max(lambda_max, 1e-300);
    // lambdas follow continuity order, not sorted order, so degenerate
    // partners are clustered pairwise rather than by adjacency
    std::vector<int> cluster(n);
    for (int j = 0; j < n; ++j) cluster[j] = j;
    auto root = [&](int j) {
        while (cluster[j] != j) j = cluster[j] = cluster[cluster[j]];
        return j;
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::abs(out.lambdas(a) - out.lambdas(b)) <= block_tol)
                cluster[root(b)] = root(a);
    for (int a = 0; a < n; ++a) {
        if (root(a) != a) continue;
        std::vector<int> members;
        for (int b = 0; b < n; ++b)
            if (root(b) == a && out.lambdas(b) > rank_tol) members.push_back(b);
        if (members.size() < 2) continue;
        const int len = static_cast<int>(members.size());
        Matrix block1(out.basis1.rows(), len), prev1(prev.basis1.rows(), len);
        Matrix block2(out.basis2.rows(), len);
        for (int c = 0; c < len; ++c) {
            block1.col(c) = out.basis1.col(members[c]);
            block2.col(c) = out.basis2.col(members[c]);
            prev1.col(c) = prev.basis1.col(members[c]);
        }
        const Matrix m = block1.adjoint() * prev1;
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
        block1 *= w;
        block2 *= w.conjugate();
        for (int c = 0; c < len; ++c) {
            out.basis1.col(members[c]) = block1.col(c);
            out.basis2.col(members[c]) = block2.col(c);
        }
    }

    // (3) phases: overlap with the reference-transported predecessor made
    // real positive, column pair counter-rotated
    for (int j = 0; j < n; ++j) {
        const Complex c = reference.col(j).dot(out.basis1.col(j));
        const double mag = std::abs(c);
        const bool occupied =
            out.lambdas(j) > rank_tol && prev.lambdas(j) > rank_tol;
        if (occupied && mag < 0.5)
            fail(ErrorKind::Continuity,
                 "Schmidt vector " + std::to_string(j) +
                     " lost continuity at t=" + std::to_string(raw.time) +
                     " (overlap " + std::to_string(mag) +
                     "; time grid too coarse or rank change crossing)",
                 raw.time);
        if (mag > 0.0) {
            const Complex phase = c / mag;
            out.basis1.col(j) /= phase;
            out.basis2.col(j) *= phase;
        }
        if (gauge.kind == GaugeKind::LinearShift) {
            const Complex shift = std::exp(Complex(0.0, -gauge.alpha * dt));
            out.basis1.col(j) *= shift;
            out.basis2.col(j) /= shift;
        }
    }

    out.rank = count_rank(out.lambdas, rank_tol);
    out.aligned = true;
    out.gauge_id = prev.gauge_id;
    return out;
}

FrameSeries track(const Trajectory& traj, GaugeConvention gauge, double rank_tol,
                  double degeneracy_tol) {
    const int n = static_cast<int>(traj.states.size());
    FrameSeries series;
    series.grid = traj.grid;
    series.gauge = gauge;
    series.model = traj.spec;
    series.gauge_id = next_gauge_id.fetch_add(1);
    series.at.resize(n);
    series.minus.resize(n);
    series.plus.resize(n);

    // anchor: deterministic raw convention at t0, with degenerate blocks
    // oriented along the forward stencil frame
    SchmidtFrame anchor = schmidt_decompose(traj.states[0], rank_tol);
    orient_anchor_blocks(anchor,
                         schmidt_decompose(traj.stencil_plus[0], rank_tol),
                         degeneracy_tol, rank_tol);
    anchor.aligned = true;
    anchor.gauge_id = series.gauge_id;
    series.at[0] = std::move(anchor);

    auto advance = [&](const SchmidtFrame& prev, const StateVector& psi) {
        SchmidtFrame raw = schmidt_decompose(psi, rank_tol);
        return align_frame(prev, std::move(raw), traj.spec, psi.time - prev.time,
                           gauge, degeneracy_tol, rank_tol);
    };

    // one backward step to the anchor's minus stencil, then forward in
    // time order: plus[i] -> minus[i+1] -> at[i+1] -> plus[i+1] -> ...
    series.minus[0] = advance(series.at[0], traj.stencil_minus[0]);
    series.plus[0] = advance(series.at[0], traj.stencil_plus[0]);
    for (int i = 1; i < n; ++i) {
        series.minus[i] = advance(series.plus[i - 1], traj.stencil_minus[i]);
        series.at[i] = advance(series.minus[i], traj.states[i]);
        series.plus[i] = advance(series.at[i], traj.stencil_plus[i]);
    }
    return series;
}

double entanglement_entropy(const SchmidtFrame& frame) {
    double s = 0.0;
    for (int j = 0; j < frame.lambdas.size(); ++j) {
        const double p = frame.lambdas(j) * frame.lambdas(j);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

StateVector reconstruct_state(const SchmidtFrame& frame, const BipartiteShape& shape) {
    const Matrix c =
        frame.basis1 * frame.lambdas.cast<Complex>().asDiagonal() *
        frame.basis2.transpose();
    return state_from_coefficients(c, shape, frame.time);
}

Matrix density_from_frame(const SchmidtFrame& frame, int k) {
    const Matrix& basis = k == 1 ? frame.basis1 : frame.basis2;
    if (k != 1 && k != 2)
        fail(ErrorKind::Usage, "subsystem index must be 1 or 2");
    const RealVector weights = frame.lambdas.array().square();
    return basis * weights.cast<Complex>().asDiagonal() * basis.adjoint();
}

}  // namespace qse
