// Command-line front end: runs one scenario and writes CSV (and optionally SVG) outputs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "optotomo/config.hpp"
#include "optotomo/errors.hpp"
#include "optotomo/scenarios.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kPhysicsError = 3, kIoError = 4 };

std::size_t worker_threads() {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("OPTO_TOMO_THREADS")) {
        try {
            const long value = std::stol(cap);
            if (value >= 1) threads = std::min<std::size_t>(threads, static_cast<std::size_t>(value));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring malformed OPTO_TOMO_THREADS='" << cap << "'\n";
        }
    }
    return threads;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Opto-mechanical homodyne readout simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "csv+svg";
    bool quiet = false;

    app.add_option("--config", config_path, "Scenario config file (key = value)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Override simulation.seed");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "csv+svg"}));
    app.add_flag("--quiet", quiet, "Suppress the printed report");

    auto* noise = app.add_subcommand("noise-budget", "Thermal, shot, SQL and total displacement noise");
    auto* scan = app.add_subcommand("theta-scan", "Zero-span band power while the readout angle is ramped");
    auto* spectra = app.add_subcommand("spectra", "Homodyne spectra at several readout angles");
    auto* tomo = app.add_subcommand("tomography", "Covariance fit and Wigner back-projection");
    for (auto* sub : {noise, scan, spectra, tomo}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    optotomo::ScenarioConfig config;
    try {
        if (!config_path.empty()) config = optotomo::load_config(config_path);
        if (seed) config.simulation.seed = *seed;
        if (!out_dir.empty()) config.output.directory = out_dir;
        config.validate();
    } catch (const optotomo::Error& e) {  // unreadable file counts as a config error too
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    const bool svg = format == "csv+svg";
    std::vector<optotomo::OutputFile> files;
    optotomo::RunReport report;
    try {
        if (noise->parsed()) {
            auto r = optotomo::run_noise_budget(config);
            files = r.files(svg);
            report = r.report;
        } else if (scan->parsed()) {
            auto r = optotomo::run_theta_scan(config);
            files = r.files(svg);
            report = r.report;
        } else if (spectra->parsed()) {
            auto r = optotomo::run_spectra(config);
            files = r.files(svg);
            report = r.report;
        } else {
            auto r = optotomo::run_tomography(config, worker_threads());
            files = r.files(svg);
            report = r.report;
        }
    } catch (const optotomo::PhysicalityError& e) {
        std::cerr << "physics error: " << e.what() << " (raw fit V11=" << e.v11 << " V22=" << e.v22
                  << " V12=" << e.v12 << ")\n";
        return kPhysicsError;
    } catch (const optotomo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const optotomo::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIoError;
    } catch (const optotomo::Error& e) {
        std::cerr << "physics error: " << e.what() << '\n';
        return kPhysicsError;
    }

    try {
        std::error_code ec;
        std::filesystem::create_directories(config.output.directory, ec);
        if (ec) throw optotomo::IoError("cannot create " + config.output.directory.string() + ": " + ec.message());
        for (const auto& file : files) {
            optotomo::write_text_file(config.output.directory / (config.output.prefix + file.name), file.content);
        }
    } catch (const optotomo::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIoError;
    }

    if (!quiet) std::cout << report.render();
    return report.all_passed() ? kOk : kPhysicsError;
}
