#include <string>

#include "doctest.h"
#include "qse/config.hpp"

using namespace qse;

namespace {

const char* kExchangeDoc = R"({
  "model": {"preset": "exchange_qubits", "params": {"omega1": 1.0, "omega2": 1.0, "g": 0.1}},
  "initial_state": "product:1,0",
  "grid": {"t0": 0.0, "t1": 4.0, "n_points": 11}
})";

ErrorKind kind_of(const std::string& doc) {
    try {
        load_run_config_string(doc);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a load failure");
    return ErrorKind::Usage;
}

}  // namespace

TEST_CASE("a preset config resolves with defaults") {
    const RunConfig cfg = load_run_config_string(kExchangeDoc);
    CHECK(cfg.model.shape == BipartiteShape(2, 2));
    CHECK(cfg.model.h_int.matrix(1, 2) == Complex(0.1));
    CHECK(cfg.grid.n_points == 11);
    CHECK(cfg.gauge.kind == GaugeKind::BareParallelTransport);
    CHECK(cfg.outputs.count("energies") == 1);
    CHECK(cfg.initial_state.amplitudes(2) == Complex(1.0));
    CHECK(!cfg.echo.empty());
}

TEST_CASE("malformed documents fail with config errors") {
    CHECK(kind_of("{ not json") == ErrorKind::Config);
    CHECK(kind_of("{}") == ErrorKind::Config);
    CHECK(kind_of(R"({"model": {"preset": "bogus"}})") == ErrorKind::Config);
    CHECK(kind_of(R"({"model": {"preset": "exchange_qubits", "params": {}}})") ==
          ErrorKind::Config);
}

TEST_CASE("config errors carry the field path") {
    try {
        load_run_config_string(
            R"({"model": {"preset": "exchange_qubits",
                "params": {"omega1": 1.0, "omega2": 1.0, "g": "x"}}})");
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("model.params.g") != std::string::npos);
    }
}

TEST_CASE("explicit models are validated as Hermitian") {
    const std::string doc = R"({
      "model": {
        "d1": 2, "d2": 2,
        "h1": [[0, [0, 1]], [0, 0]],
        "h2": [[0, 0], [0, 0]],
        "h_int": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]
      },
      "initial_state": "bell"
    })";
    try {
        load_run_config_string(doc);
        FAIL("expected a model error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Model);
        CHECK(std::string(e.what()).find("model.h1") != std::string::npos);
    }
}

TEST_CASE("explicit model round trip through serialize_model") {
    const ModelSpec spec = preset_random_dense(2, 3, 1.3, 17);
    const std::string doc = serialize_model(spec);
    const ModelSpec back = load_model_string(doc);
    CHECK(back.shape == spec.shape);
    CHECK((back.h1.matrix - spec.h1.matrix).norm() < 1e-15);
    CHECK((back.h2.matrix - spec.h2.matrix).norm() < 1e-15);
    CHECK((back.h_int.matrix - spec.h_int.matrix).norm() < 1e-15);
}

TEST_CASE("seed override replaces the preset seed") {
    const std::string doc = R"({
      "model": {"preset": "random_dense",
                "params": {"d1": 2, "d2": 2, "strength": 1.0, "seed": 1}},
      "initial_state": "bell"
    })";
    const RunConfig base = load_run_config_string(doc);
    const RunConfig same = load_run_config_string(doc, 1);
    const RunConfig other = load_run_config_string(doc, 2);
    CHECK((base.model.h1.matrix - same.model.h1.matrix).norm() == 0.0);
    CHECK((base.model.h1.matrix - other.model.h1.matrix).norm() > 1e-3);
}

TEST_CASE("amplitude lists are normalized on load") {
    const std::string doc = R"({
      "model": {"preset": "exchange_qubits",
                "params": {"omega1": 1.0, "omega2": 1.0, "g": 0.1}},
      "initial_state": [3, 0, 0, [0, 4]]
    })";
    const RunConfig cfg = load_run_config_string(doc);
    CHECK(std::abs(cfg.initial_state.amplitudes(0) - Complex(0.6)) < 1e-15);
    CHECK(std::abs(cfg.initial_state.amplitudes(3) - Complex(0.0, 0.8)) < 1e-15);
}

TEST_CASE("unknown outputs are rejected") {
    std::string doc = kExchangeDoc;
    doc.insert(doc.rfind('}'), R"(, "outputs": ["energies", "plots"])");
    CHECK(kind_of(doc) == ErrorKind::Config);
}

TEST_CASE("set_config_value rewrites dotted paths") {
    const std::string doc = set_config_value(kExchangeDoc, "model.params.g", 0.5);
    const RunConfig cfg = load_run_config_string(doc);
    CHECK(cfg.model.h_int.matrix(1, 2) == Complex(0.5));

    CHECK_THROWS_AS(set_config_value(kExchangeDoc, "model.params.missing", 1.0),
                    Error);
    try {
        set_config_value(kExchangeDoc, "grid.nope", 1.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
}
