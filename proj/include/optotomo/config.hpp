#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optotomo/homodyne.hpp"
#include "optotomo/interferometer.hpp"
#include "optotomo/physics.hpp"
#include "optotomo/timeseries.hpp"

namespace optotomo {

struct SimulationSettings {
    double duration = 0.5;      // s
    double sample_rate = 1.5e6; // Hz
    std::uint64_t seed = 1;
    double rbw = 1e3;           // Hz
};

struct NoiseBudgetSettings {
    std::vector<double> powers{0.02, 0.2};  // W
    double f_min = 10e3;
    double f_max = 25e6;
    std::size_t points = 2000;
    double dark_noise_psd = 0.0;            // m^2/Hz
    double evaluation_frequency = 120e3;    // where the headline imprecision is read off
};

struct ThetaScanSettings {
    std::size_t steps = 40;        // per 2 pi; multiples of 4 land on theta = pi/2
    double step_duration = 0.25;   // s
    double rbw = 10e3;             // Hz, zero-span resolution bandwidth
    double turns = 1.0;            // theta sweeps 0 .. 2 pi * turns
    double drive_scale = 1.0;      // multiplies the membrane displacement
};

struct SpectraSettings {
    std::vector<double> angles{0.0, 1.0471975511965976, 1.45, 1.5707963267948966};
    double rbw = 200.0;
};

struct TomographySettings {
    std::size_t angles = 12;
    std::size_t samples = 100000;
    double membrane_to_shot = 2.0;  // excess X1 noise power over shot noise
    double bin_width = 0.1;
    double grid_half_width = 6.0;
    double grid_step = 0.1;
    double cutoff_fraction = 1.0;
};

struct OutputSettings {
    std::filesystem::path directory = ".";
    std::string prefix;
};

/// Everything a CLI scenario needs; defaults reproduce the published setup.
struct ScenarioConfig {
    std::string name = "default";
    MembraneOptics membrane;
    MechanicalMode mode;
    InterferometerConfig interferometer;
    double detector_quantum_efficiency = 0.7;
    double optical_path_efficiency = 0.5 / 0.7;
    HomodyneConfig homodyne;
    double marker_frequency = 128e3;
    std::optional<double> marker_amplitude;  // m; no default on purpose
    SimulationSettings simulation;
    NoiseBudgetSettings noise_budget;
    ThetaScanSettings theta_scan;
    SpectraSettings spectra;
    TomographySettings tomography;
    OutputSettings output;

    EfficiencyBudget efficiency() const;
    std::optional<CalibrationMarker> marker() const;
    /// Enforces every module invariant. Throws ConfigError.
    void validate() const;
};

/// Parses `section.key = value[unit]` lines. `#` starts a comment.
///
/// Unknown keys, malformed values and unit mismatches raise ConfigError with the line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Keys accepted by parse_config.
std::vector<std::string> config_keys();

}  // namespace optotomo
