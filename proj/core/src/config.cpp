#include "qse/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qse {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
    fail(ErrorKind::Config, path + ": " + what);
}

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        fail(ErrorKind::Config, "document is not valid JSON");
    return doc;
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::Config, "cannot read config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) config_fail(path, "expected a number");
    return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) config_fail(path, "expected an integer");
    return j.get<int>();
}

Matrix parse_complex_matrix(const json& j, int rows, int cols,
                            const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        config_fail(path, "expected " + std::to_string(rows) + " matrix rows");
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            config_fail(path + "[" + std::to_string(r) + "]",
                        "expected " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            const json& e = row[c];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                       e[1].is_number()) {
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                config_fail(path + "[" + std::to_string(r) + "][" +
                                std::to_string(c) + "]",
                            "expected [re, im] pair or real number");
            }
        }
    }
    return m;
}

json dump_complex_matrix(const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Operator parse_hermitian(const json& j, int dim, const std::string& path) {
    const Matrix m = parse_complex_matrix(j, dim, dim, path);
    const double asym = hermitian_asymmetry(m);
    if (asym > 1e-10)
        fail(ErrorKind::Model,
             path + ": matrix is not Hermitian (asymmetry " + std::to_string(asym) +
                 ")",
             asym);
    return Operator{m, true};
}

ModelSpec model_from_json(const json& doc, const std::string& prefix,
                          std::optional<std::uint64_t> seed_override) {
    if (!doc.is_object()) config_fail(prefix, "expected an object");

    if (doc.contains("preset")) {
        const std::string name = doc["preset"].is_string()
                                     ? doc["preset"].get<std::string>()
                                     : "";
        const json params = doc.value("params", json::object());
        auto param = [&](const char* key, std::optional<double> fallback =
                                              {}) -> double {
            if (!params.contains(key)) {
                if (fallback) return *fallback;
                config_fail(prefix + ".params." + key, "missing parameter");
            }
            return require_number(params[key], prefix + ".params." + key);
        };
        if (name == "exchange_qubits") {
            return preset_exchange_qubits(param("omega1"), param("omega2"),
                                          param("g"));
        }
        if (name == "random_dense") {
            const int d1 = require_int(params.value("d1", json(2)),
                                       prefix + ".params.d1");
            const int d2 = require_int(params.value("d2", json(2)),
                                       prefix + ".params.d2");
            std::uint64_t seed = 0;
            if (seed_override) {
                seed = *seed_override;
            } else if (params.contains("seed")) {
                seed = params["seed"].get<std::uint64_t>();
            } else {
                config_fail(prefix + ".params.seed", "missing parameter");
            }
            return preset_random_dense(d1, d2, param("strength"), seed);
        }
        config_fail(prefix + ".preset", "unknown preset: " + name);
    }

    for (const char* key : {"d1", "d2", "h1", "h2", "h_int"})
        if (!doc.contains(key)) config_fail(prefix + "." + key, "missing field");
    const int d1 = require_int(doc["d1"], prefix + ".d1");
    const int d2 = require_int(doc["d2"], prefix + ".d2");
    if (d1 < 1 || d2 < 1 || d1 > d2)
        config_fail(prefix, "dimensions must satisfy 1 <= d1 <= d2");

    ModelSpec spec;
    spec.shape = BipartiteShape(d1, d2);
    spec.h1 = parse_hermitian(doc["h1"], d1, prefix + ".h1");
    spec.h2 = parse_hermitian(doc["h2"], d2, prefix + ".h2");
    spec.h_int = parse_hermitian(doc["h_int"], d1 * d2, prefix + ".h_int");
    spec.hbar = doc.contains("hbar") ? require_number(doc["hbar"], prefix + ".hbar")
                                     : 1.0;
    if (spec.hbar <= 0.0) config_fail(prefix + ".hbar", "must be positive");
    spec.label = doc.value("label", "explicit");
    return spec;
}

StateVector initial_state_from_json(const json& j, const BipartiteShape& shape,
                                    double t0, const std::string& prefix) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name.rfind("product:", 0) == 0) {
            const std::string rest = name.substr(8);
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
                config_fail(prefix, "expected product:i,j");
            try {
                const int i = std::stoi(rest.substr(0, comma));
                const int jj = std::stoi(rest.substr(comma + 1));
                return basis_product_state(shape, i, jj, t0);
            } catch (const Error&) {
                throw;
            } catch (...) {
                config_fail(prefix, "expected product:i,j with integer indices");
            }
        }
        if (name == "bell") {
            if (shape.d1 < 2 || shape.d2 < 2)
                config_fail(prefix, "bell state needs d1, d2 >= 2");
            Vector amps = Vector::Zero(shape.total());
            amps(0) = 1.0 / std::sqrt(2.0);
            amps(1 * shape.d2 + 1) = 1.0 / std::sqrt(2.0);
            return make_state(std::move(amps), shape, t0);
        }
        config_fail(prefix, "unknown state preset: " + name);
    }
    if (j.is_array()) {
        if (static_cast<int>(j.size()) != shape.total())
            config_fail(prefix, "expected " + std::to_string(shape.total()) +
                                    " amplitudes");
        Vector amps(shape.total());
        for (int i = 0; i < shape.total(); ++i) {
            const json& e = j[i];
            if (e.is_number()) {
                amps(i) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                amps(i) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                config_fail(prefix + "[" + std::to_string(i) + "]",
                            "expected [re, im] pair or real number");
            }
        }
        const double norm = amps.norm();
        if (norm <= 0.0) config_fail(prefix, "state has zero norm");
        amps /= norm;  // amplitudes are normalized on load
        return make_state(std::move(amps), shape, t0);
    }
    config_fail(prefix, "expected a preset string or amplitude list");
}

RunConfig run_config_from_json(const json& doc,
                               std::optional<std::uint64_t> seed_override) {
    if (!doc.is_object()) fail(ErrorKind::Config, "config: expected an object");
    if (!doc.contains("model")) fail(ErrorKind::Config, "model: missing field");

    RunConfig cfg;
    cfg.model = model_from_json(doc["model"], "model", seed_override);

    const json grid = doc.value("grid", json::object());
    cfg.grid.t0 = grid.contains("t0") ? require_number(grid["t0"], "grid.t0") : 0.0;
    cfg.grid.t1 = grid.contains("t1") ? require_number(grid["t1"], "grid.t1") : 1.0;
    cfg.grid.n_points =
        grid.contains("n_points") ? require_int(grid["n_points"], "grid.n_points") : 201;
    cfg.grid.substep =
        grid.contains("substep") ? require_number(grid["substep"], "grid.substep") : 0.0;
    cfg.grid.validate();

    if (doc.contains("gauge")) {
        const json& g = doc["gauge"];
        const std::string kind = g.value("kind", "bare_parallel");
        if (kind == "bare_parallel") {
            cfg.gauge.kind = GaugeKind::BareParallelTransport;
        } else if (kind == "zero_diagonal") {
            cfg.gauge.kind = GaugeKind::ZeroDiagonal;
        } else if (kind == "linear_shift") {
            cfg.gauge.kind = GaugeKind::LinearShift;
            cfg.gauge.alpha = require_number(g.value("alpha", json(0.0)), "gauge.alpha");
        } else {
            fail(ErrorKind::Config, "gauge.kind: unknown kind: " + kind);
        }
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (t.contains("rank_tol"))
            cfg.tol.rank_tol = require_number(t["rank_tol"], "tolerances.rank_tol");
        if (t.contains("degeneracy_tol"))
            cfg.tol.degeneracy_tol =
                require_number(t["degeneracy_tol"], "tolerances.degeneracy_tol");
    }

    if (doc.contains("outputs")) {
        if (!doc["outputs"].is_array())
            fail(ErrorKind::Config, "outputs: expected an array");
        cfg.outputs.clear();
        for (const auto& o : doc["outputs"]) {
            const std::string name = o.get<std::string>();
            static const std::set<std::string> known{
                "energies", "lambdas", "effective_hamiltonians", "residuals",
                "entropy"};
            if (!known.count(name))
                fail(ErrorKind::Config, "outputs: unknown output: " + name);
            cfg.outputs.insert(name);
        }
    }

    cfg.initial_state = initial_state_from_json(
        doc.value("initial_state", json("product:0,0")), cfg.model.shape, cfg.grid.t0,
        "initial_state");
    cfg.echo = doc.dump();
    return cfg;
}

}  // namespace

ModelSpec load_model_string(const std::string& text,
                            std::optional<std::uint64_t> seed_override) {
    const json doc = parse_document(text);
    // accept either a bare model document or {"model": {...}}
    if (doc.is_object() && doc.contains("model"))
        return model_from_json(doc["model"], "model", seed_override);
    return model_from_json(doc, "model", seed_override);
}

ModelSpec load_model_file(const std::string& path,
                          std::optional<std::uint64_t> seed_override) {
    const json doc = read_file(path);
    if (doc.is_object() && doc.contains("model"))
        return model_from_json(doc["model"], "model", seed_override);
    return model_from_json(doc, "model", seed_override);
}

std::string serialize_model(const ModelSpec& spec) {
    json doc;
    doc["d1"] = spec.shape.d1;
    doc["d2"] = spec.shape.d2;
    doc["h1"] = dump_complex_matrix(spec.h1.matrix);
    doc["h2"] = dump_complex_matrix(spec.h2.matrix);
    doc["h_int"] = dump_complex_matrix(spec.h_int.matrix);
    doc["hbar"] = spec.hbar;
    doc["label"] = spec.label;
    return doc.dump(2);
}

RunConfig load_run_config_string(const std::string& text,
                                 std::optional<std::uint64_t> seed_override) {
    return run_config_from_json(parse_document(text), seed_override);
}

RunConfig load_run_config_file(const std::string& path,
                               std::optional<std::uint64_t> seed_override) {
    return run_config_from_json(read_file(path), seed_override);
}

std::string set_config_value(const std::string& text, const std::string& dotted_path,
                             double value) {
    json doc = parse_document(text);
    json* node = &doc;
    std::string remaining = dotted_path;
    std::string walked;
    while (true) {
        const auto dot = remaining.find('.');
        const std::string key = remaining.substr(0, dot);
        walked = walked.empty() ? key : walked + "." + key;
        if (!node->is_object() || !node->contains(key))
            fail(ErrorKind::Config, "sweep parameter path not found at: " + walked);
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        remaining = remaining.substr(dot + 1);
    }
    *node = value;
    return doc.dump();
}

}  // namespace qse
