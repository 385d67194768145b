#include "qse/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace qse {

namespace {

// deviation of h_tilde from the bare Hamiltonian, restricted to the
// occupied subspace when the effective Hamiltonian is occupied-only
double bare_deviation(const EffectiveHamiltonian& eff, const SchmidtFrame& frame,
                      const ModelSpec& spec, double rank_tol) {
    const Operator& bare = eff.subsystem == 1 ? spec.h1 : spec.h2;
    const Matrix diff = eff.h_tilde.matrix - bare.matrix;
    if (!eff.occupied_only) return diff.norm();
    const Matrix& basis = eff.subsystem == 1 ? frame.basis1 : frame.basis2;
    Matrix occupied(basis.rows(), frame.rank);
    int c = 0;
    for (int j = 0; j < frame.lambdas.size(); ++j)
        if (frame.lambdas(j) > rank_tol) occupied.col(c++) = basis.col(j);
    const Matrix proj = occupied * occupied.adjoint();
    return (proj * diff * proj).norm();
}

}  // namespace

SimulationResult run_simulation(const RunConfig& cfg) {
    const Trajectory traj = sample_trajectory(cfg.model, cfg.initial_state, cfg.grid);
    const FrameSeries series =
        track(traj, cfg.gauge, cfg.tol.rank_tol, cfg.tol.degeneracy_tol);
    const ModelOperators ops = assemble_operators(cfg.model);
    const double h0_scale = std::max(1.0, ops.h0.matrix.norm());

    const int n = cfg.grid.n_points;
    const int d1 = cfg.model.shape.d1;
    SimulationResult result;
    result.records.reserve(n);
    result.eff1.reserve(n);
    result.eff2.reserve(n);
    result.lambda_sq = RealMatrix(n, d1);

    double u0_initial = 0.0;
    for (int i = 0; i < n; ++i) {
        EffectiveHamiltonian e1 = effective_hamiltonian(series, 1, i, cfg.tol);
        EffectiveHamiltonian e2 = effective_hamiltonian(series, 2, i, cfg.tol);
        if (!e1.occupied_only) e1 = split_effective(std::move(e1), cfg.model);
        if (!e2.occupied_only) e2 = split_effective(std::move(e2), cfg.model);

        EnergyRecord rec =
            energy_record(series, e1, e2, cfg.model, ops, i, cfg.tol);
        if (i == 0) u0_initial = rec.u0;

        const SchmidtFrame& frame = series.at[i];
        for (int j = 0; j < d1; ++j)
            result.lambda_sq(i, j) = frame.lambdas(j) * frame.lambdas(j);

        auto& s = result.summary;
        s.max_u0_drift =
            std::max(s.max_u0_drift, std::abs(rec.u0 - u0_initial) / h0_scale);
        s.max_additivity_residual =
            std::max(s.max_additivity_residual, rec.additivity_residual);
        s.max_master_residual_1 = std::max(s.max_master_residual_1, rec.master_residual_1);
        s.max_master_residual_2 = std::max(s.max_master_residual_2, rec.master_residual_2);
        s.max_entropy = std::max(s.max_entropy, rec.entropy);
        s.max_htilde_bare_dev_1 = std::max(
            s.max_htilde_bare_dev_1, bare_deviation(e1, frame, cfg.model, cfg.tol.rank_tol));
        s.max_htilde_bare_dev_2 = std::max(
            s.max_htilde_bare_dev_2, bare_deviation(e2, frame, cfg.model, cfg.tol.rank_tol));
        s.max_reconstruction_error = std::max(
            s.max_reconstruction_error,
            (reconstruct_state(frame, cfg.model.shape).amplitudes -
             traj.states[i].amplitudes)
                .norm());

        result.records.push_back(std::move(rec));
        result.eff1.push_back(std::move(e1));
        result.eff2.push_back(std::move(e2));
    }
    return result;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
    if (!out) fail(ErrorKind::Config, "cannot write output file: " + path.string());
    out << text;
}

}  // namespace

void write_run_outputs(const SimulationResult& result, const RunConfig& cfg,
                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    const bool want_energies = cfg.outputs.count("energies") ||
                               cfg.outputs.count("residuals") ||
                               cfg.outputs.count("entropy");
    if (want_energies) {
        std::string csv =
            "t,u0,u1,u2,e1_bare,e2_bare,e_int,additivity_residual,"
            "master_residual_1,master_residual_2,entropy\n";
        for (const auto& r : result.records) {
            csv += format_double(r.time);
            for (double v : {r.u0, r.u1, r.u2, r.e1_bare, r.e2_bare, r.e_int,
                             r.additivity_residual, r.master_residual_1,
                             r.master_residual_2, r.entropy})
                csv += "," + format_double(v);
            csv += "\n";
        }
        write_text(dir / "energies.csv", csv);
    }

    if (cfg.outputs.count("lambdas")) {
        std::string csv = "t";
        for (int j = 0; j < result.lambda_sq.cols(); ++j)
            csv += ",lambda_sq_" + std::to_string(j + 1);
        csv += "\n";
        for (int i = 0; i < result.lambda_sq.rows(); ++i) {
            csv += format_double(result.records[i].time);
            for (int j = 0; j < result.lambda_sq.cols(); ++j)
                csv += "," + format_double(result.lambda_sq(i, j));
            csv += "\n";
        }
        write_text(dir / "lambdas.csv", csv);
    }

    if (cfg.outputs.count("effective_hamiltonians")) {
        json entries = json::array();
        for (std::size_t i = 0; i < result.eff1.size(); ++i) {
            for (const auto* eff : {&result.eff1[i], &result.eff2[i]}) {
                json e;
                e["t"] = eff->time;
                e["subsystem"] = eff->subsystem;
                e["occupied_only"] = eff->occupied_only;
                e["asymmetry"] = eff->asymmetry;
                e["h_tilde"] = matrix_to_json(eff->h_tilde.matrix);
                if (eff->split_done) {
                    e["h_ls"] = matrix_to_json(eff->h_ls.matrix);
                    e["h_x"] = matrix_to_json(eff->h_x.matrix);
                }
                entries.push_back(std::move(e));
            }
        }
        write_text(dir / "effective_hamiltonians.json", entries.dump(2) + "\n");
    }

    json report;
    report["report_version"] = 1;
    report["tool_version"] = kToolVersion;
    report["status"] = result.status;
    report["config"] = json::parse(cfg.echo);
    const auto& s = result.summary;
    report["summary"] = {
        {"max_u0_drift", s.max_u0_drift},
        {"max_additivity_residual", s.max_additivity_residual},
        {"max_master_residual_1", s.max_master_residual_1},
        {"max_master_residual_2", s.max_master_residual_2},
        {"max_reconstruction_error", s.max_reconstruction_error},
        {"max_htilde_bare_dev_1", s.max_htilde_bare_dev_1},
        {"max_htilde_bare_dev_2", s.max_htilde_bare_dev_2},
        {"max_entropy", s.max_entropy},
    };
    write_text(dir / "report.json", report.dump(2) + "\n");
}

}  // namespace qse
