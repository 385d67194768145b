#pragma once

#include <optional>
#include <set>
#include <string>

#include "qse/energetics.hpp"

namespace qse {

inline constexpr const char* kToolVersion = "0.1.0";

// Fully resolved run configuration (model instantiated, state built).
struct RunConfig {
    ModelSpec model;
    StateVector initial_state;
    TimeGrid grid;
    GaugeConvention gauge;
    Tolerances tol;
    std::set<std::string> outputs{"energies", "lambdas"};
    std::string echo;  // normalized source document, echoed into report.json
};

// Model document: {"preset": name, "params": {...}} or explicit matrices
// {"d1","d2","h1","h2","h_int","hbar"} with complex entries as [re, im].
// Parse/validation failures carry the offending field path.
ModelSpec load_model_string(const std::string& text,
                            std::optional<std::uint64_t> seed_override = {});
ModelSpec load_model_file(const std::string& path,
                          std::optional<std::uint64_t> seed_override = {});
std::string serialize_model(const ModelSpec& spec);

RunConfig load_run_config_string(const std::string& text,
                                 std::optional<std::uint64_t> seed_override = {});
RunConfig load_run_config_file(const std::string& path,
                               std::optional<std::uint64_t> seed_override = {});

// Sweep support: replace the value at a dotted path ("model.params.g") in a
// config document. Fails with a Config error when the path does not exist.
std::string set_config_value(const std::string& text, const std::string& dotted_path,
                             double value);

}  // namespace qse
