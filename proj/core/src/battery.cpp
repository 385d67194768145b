#include "qse/battery.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "json.hpp"
#include "qse/energetics.hpp"
#include "qse/pipeline.hpp"

namespace qse {

namespace {

struct Instance {
    std::string label;
    ModelSpec spec;
    Vector amplitudes;
    double t1;
};

std::vector<Instance> battery_models() {
    std::vector<Instance> models;

    Instance exchange;
    exchange.label = "exchange";
    exchange.spec = preset_exchange_qubits(1.0, 1.0, 0.1);
    exchange.amplitudes = Vector::Zero(4);
    exchange.amplitudes(2) = 1.0;  // |1> ⊗ |0>
    exchange.t1 = std::numbers::pi / 0.1;  // one full lambda^2 period
    models.push_back(std::move(exchange));

    Instance r22;
    r22.label = "random22";
    r22.spec = preset_random_dense(2, 2, 1.0, 42);
    r22.amplitudes = Vector::Zero(4);
    r22.amplitudes(0) = 0.6;
    r22.amplitudes(3) = 0.8;  // entangled, full rank from t0
    r22.t1 = 2.0;
    models.push_back(std::move(r22));

    Instance r23;
    r23.label = "random23";
    r23.spec = preset_random_dense(2, 3, 5.0, 7);
    r23.amplitudes = Vector::Zero(6);
    r23.amplitudes(0) = 0.6;
    r23.amplitudes(4) = 0.8;
    r23.t1 = 2.0;
    models.push_back(std::move(r23));

    return models;
}

std::string format_detail(double coarse, double fine) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.3e -> %.3e", coarse, fine);
    return buf;
}

bool bits_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.array() == b.array()).all();
}

bool bits_equal(const RealVector& a, const RealVector& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

FrameSeries make_series(const Instance& inst, const BatteryOptions& opt,
                        double substep_fraction, GaugeConvention gauge = {}) {
    TimeGrid grid{0.0, inst.t1, opt.n_points, substep_fraction * inst.t1};
    Vector amps = inst.amplitudes / inst.amplitudes.norm();
    const StateVector psi0 = make_state(std::move(amps), inst.spec.shape, 0.0);
    const Trajectory traj = sample_trajectory(inst.spec, psi0, grid);
    return track(traj, gauge, opt.tol.rank_tol, opt.tol.degeneracy_tol);
}

double max_additivity(const FrameSeries& series, const ModelOperators& ops,
                      const Tolerances& tol) {
    double mx = 0.0;
    for (int i = 0; i < static_cast<int>(series.at.size()); ++i) {
        const auto e1 = effective_hamiltonian(series, 1, i, tol);
        const auto e2 = effective_hamiltonian(series, 2, i, tol);
        const double u0 =
            total_energy(reconstruct_state(series.at[i], series.model.shape), ops.h0);
        const double u1 = local_energy(series.at[i], e1);
        const double u2 = local_energy(series.at[i], e2);
        mx = std::max(mx, additivity_residual(u0, u1, u2));
    }
    return mx;
}

double max_master(const FrameSeries& series, int k, const Tolerances& tol) {
    double mx = 0.0;
    for (int i = 0; i < static_cast<int>(series.at.size()); ++i)
        mx = std::max(mx, master_equation_residual(series, k, i, tol));
    return mx;
}

// ratio check with a floor: once the fine-step residual reaches the noise
// floor the ratio is no longer meaningful
bool converges_second_order(double coarse, double fine, double* ratio_out) {
    if (fine <= 1e-10) {
        *ratio_out = 0.0;
        return true;
    }
    const double ratio = coarse / fine;
    *ratio_out = ratio;
    // regime guard: a coarse residual this large means the stencil is not
    // in its asymptotic range at all
    return ratio >= 3.5 && ratio <= 4.5 && coarse <= 1e-4;
}

}  // namespace

BatteryOptions battery_options_from_config(const RunConfig& cfg) {
    BatteryOptions opt;
    opt.tol = cfg.tol;
    opt.n_points = cfg.grid.n_points;
    if (cfg.grid.substep > 0.0)
        opt.substep_fraction = cfg.grid.substep / (cfg.grid.t1 - cfg.grid.t0);
    if (cfg.gauge.kind == GaugeKind::LinearShift && cfg.gauge.alpha != 0.0)
        opt.gauge_alpha = cfg.gauge.alpha;
    return opt;
}

std::vector<CheckItem> run_check_battery(const BatteryOptions& opt_in) {
    // a deliberately coarse stencil must show up as failed convergence
    // ratios, not as an aborting stencil-quality error
    BatteryOptions opt = opt_in;
    opt.tol.asymmetry_limit = 1e100;

    std::vector<CheckItem> items;
    auto add = [&](const std::string& name, double value, double threshold,
                   const std::string& detail = "") {
        items.push_back({name, value <= threshold, value, threshold, detail});
    };

    const auto models = battery_models();
    for (const auto& inst : models) {
        const ModelOperators ops = assemble_operators(inst.spec);
        const double h0_scale = std::max(1.0, ops.h0.matrix.norm());
        const FrameSeries series = make_series(inst, opt, opt.substep_fraction);
        const FrameSeries series_half =
            make_series(inst, opt, opt.substep_fraction / 2.0);

        // energy conservation along the exactly propagated trajectory
        double u0_first = 0.0, drift = 0.0;
        for (int i = 0; i < static_cast<int>(series.at.size()); ++i) {
            const double u0 = total_energy(
                reconstruct_state(series.at[i], inst.spec.shape), ops.h0);
            if (i == 0) u0_first = u0;
            drift = std::max(drift, std::abs(u0 - u0_first) / h0_scale);
        }
        add("energy_conservation." + inst.label, drift, 1e-10);

        // additivity at the working substep plus its halving ratio
        const double add_coarse = max_additivity(series, ops, opt.tol);
        const double add_fine = max_additivity(series_half, ops, opt.tol);
        add("additivity.residual." + inst.label, add_coarse, 1e-6);
        double ratio = 0.0;
        const bool conv = converges_second_order(add_coarse, add_fine, &ratio);
        items.push_back({"additivity.convergence." + inst.label, conv, ratio, 4.5,
                         "residuals " + format_detail(add_coarse, add_fine)});

        // master equation: second-order residual, traceless diagonal dissipator
        const int k_full = 1;
        const double m_coarse = max_master(series, k_full, opt.tol);
        const double m_fine = max_master(series_half, k_full, opt.tol);
        const bool mconv = converges_second_order(m_coarse, m_fine, &ratio);
        items.push_back({"master.convergence." + inst.label, mconv, ratio, 4.5,
                         "residuals " + format_detail(m_coarse, m_fine)});

        double trace_max = 0.0, offdiag_max = 0.0;
        for (int i = 0; i < static_cast<int>(series.at.size()); ++i) {
            for (int k : {1, 2}) {
                const Operator d = dissipator(series, k, i);
                trace_max = std::max(trace_max, std::abs(d.matrix.trace()));
                const Matrix& basis =
                    k == 1 ? series.at[i].basis1 : series.at[i].basis2;
                Matrix in_basis = basis.adjoint() * d.matrix * basis;
                in_basis.diagonal().setZero();
                offdiag_max = std::max(offdiag_max, in_basis.norm());
            }
        }
        add("dissipator.traceless." + inst.label, trace_max, 1e-10);
        add("dissipator.diagonal." + inst.label, offdiag_max, 1e-10);

        // effective-Hamiltonian split on full-rank frames
        if (inst.spec.shape.d1 == inst.spec.shape.d2) {
            double identity_max = 0.0, cross_max = 0.0, commute_max = 0.0,
                   offdiag_x_max = 0.0;
            int tested = 0;
            for (int i = 0; i < static_cast<int>(series.at.size()); ++i) {
                for (int k : {1, 2}) {
                    EffectiveHamiltonian eff =
                        effective_hamiltonian(series, k, i, opt.tol);
                    if (eff.occupied_only) continue;
                    ++tested;
                    eff = split_effective(std::move(eff), inst.spec);
                    const Operator& bare = k == 1 ? inst.spec.h1 : inst.spec.h2;
                    identity_max = std::max(
                        identity_max, (eff.h_tilde.matrix - bare.matrix -
                                       eff.h_ls.matrix - eff.h_x.matrix)
                                          .norm());
                    commute_max = std::max(
                        commute_max,
                        (eff.h_ls.matrix * bare.matrix - bare.matrix * eff.h_ls.matrix)
                                .norm() /
                            std::max(1.0, eff.h_ls.matrix.norm() * bare.matrix.norm()));
                    const Spectral s = spectral_decompose(bare);
                    offdiag_x_max = std::max(
                        offdiag_x_max,
                        (s.eigenvectors.adjoint() * eff.h_x.matrix * s.eigenvectors)
                            .diagonal()
                            .norm());
                    const ProjectionSplit proj =
                        lamb_shift_from_projections(series, k, i);
                    cross_max = std::max(
                        cross_max,
                        std::max((eff.h_ls.matrix - proj.h_ls.matrix).norm(),
                                 (eff.h_x.matrix - proj.h_x.matrix).norm()));
                }
            }
            add("split.identity." + inst.label, identity_max, 1e-10,
                std::to_string(tested) + " frames");
            add("split.ls_commutes." + inst.label, commute_max, 1e-8);
            add("split.x_offdiag." + inst.label, offdiag_x_max, 1e-10);
            add("split.crosscheck." + inst.label, cross_max, 1e-6);
        }
    }

    // non-interacting limit: effective equals bare up to the stencil floor
    {
        Instance iso;
        iso.label = "noninteracting";
        iso.spec = preset_exchange_qubits(1.0, 1.0, 0.0);
        iso.amplitudes = Vector::Zero(4);
        iso.amplitudes(0) = std::sqrt(0.7);
        iso.amplitudes(3) = std::sqrt(0.3);
        iso.t1 = 10.0;
        const FrameSeries series = make_series(iso, opt, opt.substep_fraction);
        const double delta = series.grid.effective_substep();
        const ModelOperators ops = assemble_operators(iso.spec);
        const double bound =
            std::max(1e-8, std::pow(ops.h0.matrix.norm(), 3.0) * delta * delta);
        double dev = 0.0;
        for (int i = 0; i < static_cast<int>(series.at.size()); ++i)
            for (int k : {1, 2}) {
                const auto eff = effective_hamiltonian(series, k, i, opt.tol);
                const Operator& bare = k == 1 ? iso.spec.h1 : iso.spec.h2;
                dev = std::max(dev, (eff.h_tilde.matrix - bare.matrix).norm());
            }
        add("noninteracting.limit", dev, bound);
    }

    // gauge behaviour on the exchange instance
    {
        const auto& inst = models[0];
        const FrameSeries series = make_series(inst, opt, opt.substep_fraction);
        const double alpha = opt.gauge_alpha;
        const GaugeSpec linear =
            GaugeSpec::uniform_linear(inst.spec.shape.d1, 0.0, alpha);

        const FrameSeries gauged = apply_gauge(series, linear);
        double recon_dev = 0.0;
        for (int i = 0; i < static_cast<int>(series.at.size()); ++i)
            recon_dev = std::max(
                recon_dev,
                (reconstruct_state(gauged.at[i], inst.spec.shape).amplitudes -
                 reconstruct_state(series.at[i], inst.spec.shape).amplitudes)
                    .norm());
        add("gauge.reconstruction", recon_dev, 1e-12);

        const GaugeCheckReport rep = gauge_transform_check(series, linear, opt.tol);
        add("gauge.eq11", rep.generator_shift_max, 1e-6);
        add("gauge.eq12", rep.energy_shift_max, 1e-6);
        add("gauge.sum_invariance", rep.sum_invariance_max, 1e-8);

        // spectra shift by (-1)^k hbar alpha under theta_j = alpha t
        double spectrum_dev = 0.0;
        for (int i = 0; i < static_cast<int>(series.at.size()); ++i)
            for (int k : {1, 2}) {
                const auto eff = effective_hamiltonian(series, k, i, opt.tol);
                // occupied-restricted generators carry spectator zero modes
                // the uniform shift does not touch
                if (eff.occupied_only) continue;
                const auto effp = effective_hamiltonian(gauged, k, i, opt.tol);
                const RealVector ev = spectral_decompose(eff.h_tilde).eigenvalues;
                const RealVector evp = spectral_decompose(effp.h_tilde).eigenvalues;
                const double shift = (k == 1 ? -1.0 : 1.0) * inst.spec.hbar * alpha;
                spectrum_dev = std::max(
                    spectrum_dev, (evp - ev - RealVector::Constant(ev.size(), shift))
                                      .cwiseAbs()
                                      .maxCoeff());
            }
        add("gauge.spectrum_shift", spectrum_dev, 1e-8);

        // tabulated gauge with a nonlinear component
        std::vector<double> times;
        const int samples = 2001;
        RealMatrix values(samples, inst.spec.shape.d1);
        for (int i = 0; i < samples; ++i) {
            const double t = -1.0 + (inst.t1 + 2.0) * i / (samples - 1.0);
            times.push_back(t);
            for (int j = 0; j < inst.spec.shape.d1; ++j)
                values(i, j) = alpha * t + 0.05 * (j + 1) * std::sin(t);
        }
        const GaugeSpec table = GaugeSpec::from_table(std::move(times), std::move(values));
        const GaugeCheckReport trep = gauge_transform_check(series, table, opt.tol);
        add("gauge.tabulated.eq11", trep.generator_shift_max, 1e-6);
        add("gauge.tabulated.eq12", trep.energy_shift_max, 1e-6);
        add("gauge.tabulated.sum_invariance", trep.sum_invariance_max, 1e-8);
    }

    // closed-form exchange oracle
    {
        const auto& inst = models[0];
        const FrameSeries series = make_series(inst, opt, opt.substep_fraction);
        const double g = 0.1;
        double lambda_dev = 0.0, entropy_peak = 0.0;
        for (int i = 0; i < static_cast<int>(series.at.size()); ++i) {
            const SchmidtFrame& f = series.at[i];
            const double c2 = std::cos(g * f.time) * std::cos(g * f.time);
            const double s2 = std::sin(g * f.time) * std::sin(g * f.time);
            lambda_dev = std::max(
                lambda_dev, std::abs(f.lambdas(0) * f.lambdas(0) - c2));
            lambda_dev = std::max(
                lambda_dev, std::abs(f.lambdas(1) * f.lambdas(1) - s2));
            entropy_peak = std::max(entropy_peak, entanglement_entropy(f));
        }
        add("closedform.lambda", lambda_dev, 1e-8);
        add("closedform.entropy_peak", std::abs(entropy_peak - std::log(2.0)), 1e-6);
    }

    // Schmidt-layer invariants on seeded random states
    {
        double recon = 0.0, ortho = 0.0, spectra = 0.0, norm_dev = 0.0;
        bool deterministic = true;
        const BipartiteShape shapes[] = {BipartiteShape(2, 2), BipartiteShape(2, 3),
                                         BipartiteShape(3, 3)};
        for (int trial = 0; trial < 20; ++trial) {
            const BipartiteShape shape = shapes[trial % 3];
            std::mt19937_64 rng(100 + trial);
            std::normal_distribution<double> gauss(0.0, 1.0);
            Vector amps(shape.total());
            for (int i = 0; i < amps.size(); ++i)
                amps(i) = Complex(gauss(rng), gauss(rng));
            amps /= amps.norm();
            const StateVector psi = make_state(amps, shape, 0.0);

            const SchmidtFrame f = schmidt_decompose(psi, opt.tol.rank_tol);
            const SchmidtFrame f2 = schmidt_decompose(psi, opt.tol.rank_tol);
            deterministic = deterministic && bits_equal(f.basis1, f2.basis1) &&
                            bits_equal(f.basis2, f2.basis2) &&
                            bits_equal(f.lambdas, f2.lambdas);

            recon = std::max(recon,
                             (reconstruct_state(f, shape).amplitudes - psi.amplitudes)
                                 .norm());
            ortho = std::max(
                ortho, (f.basis1.adjoint() * f.basis1 -
                        Matrix::Identity(shape.d1, shape.d1))
                           .norm());
            ortho = std::max(
                ortho, (f.basis2.adjoint() * f.basis2 -
                        Matrix::Identity(shape.d1, shape.d1))
                           .norm());
            norm_dev = std::max(
                norm_dev, std::abs(f.lambdas.array().square().sum() - 1.0));

            const Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
            const Operator rho_op{rho, true};
            const RealVector s1 =
                spectral_decompose(partial_trace(rho_op, shape, 1)).eigenvalues;
            const RealVector s2 =
                spectral_decompose(partial_trace(rho_op, shape, 2)).eigenvalues;
            // both spectra: top d1 values agree, the rest of s2 vanish
            for (int j = 0; j < shape.d1; ++j)
                spectra = std::max(
                    spectra, std::abs(s1(shape.d1 - 1 - j) - s2(shape.d2 - 1 - j)));
            for (int j = 0; j < shape.d2 - shape.d1; ++j)
                spectra = std::max(spectra, std::abs(s2(j)));
        }
        add("schmidt.reconstruction", recon, 1e-10);
        add("schmidt.orthonormality", ortho, 1e-12);
        add("schmidt.normalization", norm_dev, 1e-12);
        add("schmidt.marginal_spectra", spectra, 1e-10);
        items.push_back({"schmidt.decompose_determinism", deterministic,
                         deterministic ? 0.0 : 1.0, 0.0, ""});

        // alignment determinism: tracking twice is bit-identical
        const auto& inst = models[0];
        const FrameSeries a = make_series(inst, opt, opt.substep_fraction);
        const FrameSeries b = make_series(inst, opt, opt.substep_fraction);
        bool align_det = true;
        for (int i = 0; i < static_cast<int>(a.at.size()); ++i)
            align_det = align_det && bits_equal(a.at[i].basis1, b.at[i].basis1) &&
                        bits_equal(a.at[i].basis2, b.at[i].basis2) &&
                        bits_equal(a.at[i].lambdas, b.at[i].lambdas);
        items.push_back({"schmidt.alignment_determinism", align_det,
                         align_det ? 0.0 : 1.0, 0.0, ""});
    }

    return items;
}

bool all_pass(const std::vector<CheckItem>& items) {
    for (const auto& item : items)
        if (!item.pass) return false;
    return true;
}

std::string battery_report_json(const std::vector<CheckItem>& items,
                                const std::string& config_echo) {
    nlohmann::json report;
    report["report_version"] = 1;
    report["tool_version"] = kToolVersion;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& item : items) {
        checks.push_back({{"name", item.name},
                          {"pass", item.pass},
                          {"value", item.value},
                          {"threshold", item.threshold},
                          {"detail", item.detail}});
    }
    report["checks"] = std::move(checks);
    report["all_pass"] = all_pass(items);
    if (!config_echo.empty())
        report["config"] = nlohmann::json::parse(config_echo);
    return report.dump(2) + "\n";
}

}  // namespace qse
