#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <future>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "qse/battery.hpp"
#include "qse/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInvariant = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) qse::fail(qse::ErrorKind::Config, "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Run-level invariants gating exit code 4. Master residuals are not gated:
// for unequal subsystem dimensions the reduced dynamics of the larger side
// legitimately picks up a rank-projection term.
bool run_invariants_ok(const qse::SimulationResult& result) {
    const auto& s = result.summary;
    return s.max_u0_drift <= 1e-10 && s.max_reconstruction_error <= 1e-10 &&
           s.max_additivity_residual <= 1e-6;
}

int do_run(const std::string& config_path, const std::string& out_dir,
           std::optional<std::uint64_t> seed) {
    qse::RunConfig cfg = qse::load_run_config_file(config_path, seed);
    qse::SimulationResult result = qse::run_simulation(cfg);
    const bool ok = run_invariants_ok(result);
    if (!ok) result.status = "invariant_failure";
    qse::write_run_outputs(result, cfg, out_dir);
    std::cout << "run " << result.status << ": " << result.records.size()
              << " samples -> " << out_dir << "\n";
    if (!ok) {
        std::cerr << "invariant failure: u0 drift "
                  << qse::format_double(result.summary.max_u0_drift)
                  << ", additivity "
                  << qse::format_double(result.summary.max_additivity_residual)
                  << ", reconstruction "
                  << qse::format_double(result.summary.max_reconstruction_error)
                  << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}

int do_check(const std::string& config_path, const std::string& report_path,
             std::optional<std::uint64_t> seed) {
    qse::BatteryOptions opt;
    std::string echo;
    if (!config_path.empty()) {
        const qse::RunConfig cfg = qse::load_run_config_file(config_path, seed);
        opt = qse::battery_options_from_config(cfg);
        echo = cfg.echo;
    }
    const auto items = qse::run_check_battery(opt);
    {
        std::ofstream out(report_path, std::ios::binary);
        if (!out)
            qse::fail(qse::ErrorKind::Config,
                      "cannot write report: " + report_path);
        out << qse::battery_report_json(items, echo);
    }
    for (const auto& item : items) {
        std::printf("%s %-40s value=%.3e threshold=%.3e%s%s\n",
                    item.pass ? "PASS" : "FAIL", item.name.c_str(), item.value,
                    item.threshold, item.detail.empty() ? "" : "  ",
                    item.detail.c_str());
    }
    const bool ok = qse::all_pass(items);
    std::printf("%s: %zu checks\n", ok ? "all passed" : "FAILURES PRESENT",
                items.size());
    return ok ? kExitOk : kExitInvariant;
}

int do_sweep(const std::string& config_path, const std::string& param,
             const std::vector<double>& values, const std::string& out_dir,
             std::optional<std::uint64_t> seed) {
    if (values.empty())
        qse::fail(qse::ErrorKind::Config, "sweep requires at least one value");
    const std::string base = read_file(config_path);
    fs::create_directories(out_dir);

    struct Row {
        std::string status = "ok";
        int code = kExitOk;
        std::string message;
        qse::SimulationResult::Summary summary{};
    };
    std::vector<Row> rows(values.size());

    // independent runs: one failing value is reported but does not abort
    // the others
    std::vector<std::future<void>> tasks;
    for (std::size_t i = 0; i < values.size(); ++i) {
        tasks.push_back(std::async(std::launch::async, [&, i] {
            char tag[64];
            std::snprintf(tag, sizeof(tag), "%03zu", i);
            const fs::path dir =
                fs::path(out_dir) /
                (std::string(tag) + "_" + qse::format_double(values[i]));
            Row& row = rows[i];
            try {
                const std::string doc =
                    qse::set_config_value(base, param, values[i]);
                const qse::RunConfig cfg = qse::load_run_config_string(doc, seed);
                qse::SimulationResult result = qse::run_simulation(cfg);
                if (!run_invariants_ok(result)) {
                    result.status = "invariant_failure";
                    row.status = "invariant_failure";
                    row.code = kExitInvariant;
                }
                row.summary = result.summary;
                qse::write_run_outputs(result, cfg, dir.string());
            } catch (const qse::Error& e) {
                row.status = "error";
                row.code = qse::exit_code_for(e.kind());
                row.message = e.what();
            }
        }));
    }
    for (auto& t : tasks) t.get();

    std::ostringstream summary;
    summary << "index,value,status,exit_code,max_additivity_residual,"
               "max_u0_drift,max_entropy\n";
    int worst = kExitOk;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Row& row = rows[i];
        if (!row.message.empty())
            std::cerr << param << "=" << qse::format_double(values[i])
                      << " failed: " << row.message << "\n";
        worst = std::max(worst, row.code);
        summary << i << ',' << qse::format_double(values[i]) << ',' << row.status
                << ',' << row.code << ','
                << qse::format_double(row.summary.max_additivity_residual) << ','
                << qse::format_double(row.summary.max_u0_drift) << ','
                << qse::format_double(row.summary.max_entropy) << '\n';
    }
    std::ofstream out(fs::path(out_dir) / "summary.csv", std::ios::binary);
    out << summary.str();
    std::cout << "sweep: " << values.size() << " values -> " << out_dir << "\n";
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schmidt-basis quantum energetics simulator"};
    app.set_version_flag("--version", qse::kToolVersion);
    app.require_subcommand(1);

    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "linear-algebra thread count");
    auto* seed_opt =
        app.add_option("--seed", seed, "override the seed of seeded presets");

    std::string run_config, run_out;
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("--config", run_config, "JSON run configuration")
        ->required();
    run_cmd->add_option("--out", run_out, "output directory")->required();

    std::string check_config, check_report = "report.json";
    auto* check_cmd =
        app.add_subcommand("check", "run the numerical invariant battery");
    check_cmd->add_option("--config", check_config,
                          "optional configuration tuning the battery");
    check_cmd->add_option("--report", check_report,
                          "where to write the battery report");

    std::string sweep_config, sweep_param, sweep_out;
    std::vector<double> sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "run over a parameter range");
    sweep_cmd->add_option("--config", sweep_config, "JSON run configuration")
        ->required();
    sweep_cmd->add_option("--param", sweep_param, "dotted config path to vary")
        ->required();
    sweep_cmd
        ->add_option("--values", sweep_values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (threads > 0) Eigen::setNbThreads(threads);
    const std::optional<std::uint64_t> seed_override =
        seed_opt->count() > 0 ? std::optional<std::uint64_t>(seed) : std::nullopt;

    try {
        if (run_cmd->parsed()) return do_run(run_config, run_out, seed_override);
        if (check_cmd->parsed())
            return do_check(check_config, check_report, seed_override);
        if (sweep_cmd->parsed())
            return do_sweep(sweep_config, sweep_param, sweep_values, sweep_out,
                            seed_override);
    } catch (const qse::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qse::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
