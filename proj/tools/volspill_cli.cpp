#include "volspill/errors.hpp"
#include "volspill/pipeline.hpp"
#include "volspill/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

int cmd_run(const fs::path& config_path) {
    const auto config = volspill::load_pipeline_config(config_path);
    const auto report = volspill::run(config);
    for (const auto& p : report.pairs) {
        std::cerr << p.name << ": " << (p.error.empty() ? "ok" : p.error) << '\n';
        for (const auto& s : p.subperiods) {
            if (!s.error.empty()) std::cerr << "  " << s.error << '\n';
        }
    }
    std::cout << (config.output_dir / "report.json").string() << '\n';
    return report.exit_status();
}

int cmd_simulate(const fs::path& config_path) {
    const auto cfg = volspill::KeyValueConfig::load(config_path);
    volspill::simulate_dataset(cfg, config_path.has_parent_path() ? config_path.parent_path() : fs::path("."));
    return 0;
}

int cmd_summarize(const fs::path& report_path) {
    std::ifstream in(report_path);
    if (!in) throw volspill::InputError("cannot open report: " + report_path.string());
    volspill::Json report;
    try {
        report = volspill::Json::parse(in);
    } catch (const volspill::Json::parse_error& e) {
        throw volspill::InputError(report_path.string() + ": " + e.what());
    }
    std::cout << volspill::summarize(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"U.S.-Brazil grain price volatility spillover analysis"};
    app.set_version_flag("--version", std::string(volspill::kVersion));
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Run the full estimation pipeline");
    run->add_option("config", run_config, "Configuration file")->required();

    std::string sim_config;
    auto* simulate = app.add_subcommand("simulate", "Write the synthetic dataset described by a configuration");
    simulate->add_option("config", sim_config, "Configuration file")->required();

    std::string report_path;
    auto* summarize = app.add_subcommand("summarize", "Print text tables from a report.json");
    summarize->add_option("report", report_path, "Report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_config);
        if (*simulate) return cmd_simulate(sim_config);
        if (*summarize) return cmd_summarize(report_path);
    } catch (const volspill::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const volspill::EstimationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 3;
}
