#include "optotomo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"

namespace optotomo {

namespace {

enum class Dim { none, length, frequency, power, mass, temperature, time, angle, density, psd };

struct UnitScale {
    std::string_view suffix;
    double scale;
};

const std::vector<UnitScale>& units_for(Dim dim) {
    static const std::map<Dim, std::vector<UnitScale>> table{
        {Dim::none, {{"", 1.0}, {"%", 0.01}}},
        {Dim::length, {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}}},
        {Dim::frequency, {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
        {Dim::power, {{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}}},
        {Dim::mass, {{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}, {"ng", 1e-12}}},
        {Dim::temperature, {{"K", 1.0}}},
        {Dim::time, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}},
        {Dim::angle, {{"", 1.0}, {"rad", 1.0}, {"mrad", 1e-3}, {"deg", kPi / 180.0}, {"pi", kPi}}},
        {Dim::density, {{"kg/m3", 1.0}, {"g/cm3", 1e3}}},
        {Dim::psd, {{"m2/Hz", 1.0}}},
    };
    return table.at(dim);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_quantity(std::string_view text, Dim dim) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc()) throw ConfigError("expected a number, got '" + std::string(text) + "'");
    const auto suffix = trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)));
    for (const auto& unit : units_for(dim)) {
        if (unit.suffix == suffix) {
            if (!std::isfinite(value)) throw ConfigError("value must be finite");
            return value * unit.scale;
        }
    }
    throw ConfigError("unit '" + std::string(suffix) + "' does not fit this key");
}

std::vector<double> parse_list(std::string_view text, Dim dim) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_quantity(text.substr(0, comma), dim));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

Setter quantity(double ScenarioConfig::*field, Dim dim) {
    return [field, dim](ScenarioConfig& c, std::string_view v) { c.*field = parse_quantity(v, dim); };
}

template <class Member>
Setter nested(Member member, Dim dim) {
    return [member, dim](ScenarioConfig& c, std::string_view v) { member(c) = parse_quantity(v, dim); };
}

template <class Member>
Setter count(Member member) {
    return [member](ScenarioConfig& c, std::string_view v) {
        member(c) = static_cast<std::size_t>(parse_unsigned(v));
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    using C = ScenarioConfig;
    static const std::map<std::string, Setter, std::less<>> table{
        {"scenario.name", [](C& c, std::string_view v) { c.name = std::string(trim(v)); }},
        {"membrane.refractive_index", nested([](C& c) -> double& { return c.membrane.refractive_index; }, Dim::none)},
        {"membrane.thickness", nested([](C& c) -> double& { return c.membrane.thickness; }, Dim::length)},
        {"membrane.side_length", nested([](C& c) -> double& { return c.membrane.side_length; }, Dim::length)},
        {"membrane.density", nested([](C& c) -> double& { return c.membrane.density; }, Dim::density)},
        {"membrane.power_reflectivity", nested([](C& c) -> double& { return c.membrane.power_reflectivity; }, Dim::none)},
        {"membrane.reflectivity_tolerance", nested([](C& c) -> double& { return c.membrane.reflectivity_tolerance; }, Dim::none)},
        {"mode.f_res", nested([](C& c) -> double& { return c.mode.resonance_frequency; }, Dim::frequency)},
        {"mode.q", nested([](C& c) -> double& { return c.mode.quality_factor; }, Dim::none)},
        {"mode.effective_mass", nested([](C& c) -> double& { return c.mode.effective_mass; }, Dim::mass)},
        {"mode.temperature", nested([](C& c) -> double& { return c.mode.temperature; }, Dim::temperature)},
        {"interferometer.wavelength", nested([](C& c) -> double& { return c.interferometer.wavelength; }, Dim::length)},
        {"interferometer.input_power", nested([](C& c) -> double& { return c.interferometer.input_power; }, Dim::power)},
        {"interferometer.lo_power",
         [](C& c, std::string_view v) {
             c.interferometer.lo_power = parse_quantity(v, Dim::power);
             c.homodyne.lo_amplitude = std::sqrt(c.interferometer.lo_power);
         }},
        {"interferometer.contrast_defect", nested([](C& c) -> double& { return c.interferometer.dark_port_contrast_defect; }, Dim::none)},
        {"efficiency.detector_qe", quantity(&C::detector_quantum_efficiency, Dim::none)},
        {"efficiency.optics", quantity(&C::optical_path_efficiency, Dim::none)},
        {"homodyne.angle", nested([](C& c) -> double& { return c.homodyne.angle; }, Dim::angle)},
        {"homodyne.pm_frequency", nested([](C& c) -> double& { return c.homodyne.pm_frequency; }, Dim::frequency)},
        {"homodyne.lock_target", nested([](C& c) -> double& { return c.homodyne.lock_target; }, Dim::angle)},
        {"homodyne.signal_power", nested([](C& c) -> double& { return c.homodyne.signal_power; }, Dim::power)},
        {"marker.frequency", quantity(&C::marker_frequency, Dim::frequency)},
        {"marker.amplitude", [](C& c, std::string_view v) { c.marker_amplitude = parse_quantity(v, Dim::length); }},
        {"simulation.duration", nested([](C& c) -> double& { return c.simulation.duration; }, Dim::time)},
        {"simulation.rate", nested([](C& c) -> double& { return c.simulation.sample_rate; }, Dim::frequency)},
        {"simulation.seed", [](C& c, std::string_view v) { c.simulation.seed = parse_unsigned(v); }},
        {"simulation.rbw", nested([](C& c) -> double& { return c.simulation.rbw; }, Dim::frequency)},
        {"noise_budget.powers", [](C& c, std::string_view v) { c.noise_budget.powers = parse_list(v, Dim::power); }},
        {"noise_budget.f_min", nested([](C& c) -> double& { return c.noise_budget.f_min; }, Dim::frequency)},
        {"noise_budget.f_max", nested([](C& c) -> double& { return c.noise_budget.f_max; }, Dim::frequency)},
        {"noise_budget.points", count([](C& c) -> std::size_t& { return c.noise_budget.points; })},
        {"noise_budget.dark_noise_psd", nested([](C& c) -> double& { return c.noise_budget.dark_noise_psd; }, Dim::psd)},
        {"noise_budget.evaluation_frequency", nested([](C& c) -> double& { return c.noise_budget.evaluation_frequency; }, Dim::frequency)},
        {"theta_scan.steps", count([](C& c) -> std::size_t& { return c.theta_scan.steps; })},
        {"theta_scan.step_duration", nested([](C& c) -> double& { return c.theta_scan.step_duration; }, Dim::time)},
        {"theta_scan.rbw", nested([](C& c) -> double& { return c.theta_scan.rbw; }, Dim::frequency)},
        {"theta_scan.turns", nested([](C& c) -> double& { return c.theta_scan.turns; }, Dim::none)},
        {"theta_scan.drive_scale", nested([](C& c) -> double& { return c.theta_scan.drive_scale; }, Dim::none)},
        {"spectra.angles", [](C& c, std::string_view v) { c.spectra.angles = parse_list(v, Dim::angle); }},
        {"spectra.rbw", nested([](C& c) -> double& { return c.spectra.rbw; }, Dim::frequency)},
        {"tomography.angles", count([](C& c) -> std::size_t& { return c.tomography.angles; })},
        {"tomography.samples", count([](C& c) -> std::size_t& { return c.tomography.samples; })},
        {"tomography.membrane_to_shot", nested([](C& c) -> double& { return c.tomography.membrane_to_shot; }, Dim::none)},
        {"tomography.bin_width", nested([](C& c) -> double& { return c.tomography.bin_width; }, Dim::none)},
        {"tomography.grid_half_width", nested([](C& c) -> double& { return c.tomography.grid_half_width; }, Dim::none)},
        {"tomography.grid_step", nested([](C& c) -> double& { return c.tomography.grid_step; }, Dim::none)},
        {"tomography.cutoff_fraction", nested([](C& c) -> double& { return c.tomography.cutoff_fraction; }, Dim::none)},
        {"output.dir", [](C& c, std::string_view v) { c.output.directory = std::string(trim(v)); }},
        {"output.prefix", [](C& c, std::string_view v) { c.output.prefix = std::string(trim(v)); }},
    };
    return table;
}

template <class Fn>
void check(Fn&& fn, const char* section) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string(section) + ": " + e.what());
    }
}

}  // namespace

EfficiencyBudget ScenarioConfig::efficiency() const {
    return overall_efficiency(detector_quantum_efficiency, optical_path_efficiency);
}

std::optional<CalibrationMarker> ScenarioConfig::marker() const {
    if (!marker_amplitude) return std::nullopt;
    return CalibrationMarker{marker_frequency, *marker_amplitude};
}

void ScenarioConfig::validate() const {
    check([&] { membrane.validate(interferometer.wavelength); }, "membrane");
    check([&] { mode.validate(); }, "mode");
    check([&] { interferometer.validate(); }, "interferometer");
    check([&] { (void)efficiency(); }, "efficiency");
    check([&] { homodyne.validate(); }, "homodyne");
    if (std::abs(interferometer.membrane_amplitude_reflectivity -
                 std::sqrt(membrane.power_reflectivity)) > 1e-12) {
        throw ConfigError("interferometer: membrane amplitude reflectivity must equal sqrt(R)");
    }
    if (marker_amplitude) {
        check([&] { marker()->validate(mode, simulation.sample_rate); }, "marker");
    }
    if (!(simulation.duration > 0.0)) throw ConfigError("simulation.duration must be positive");
    if (!(simulation.sample_rate > 10.0 * mode.resonance_frequency)) {
        throw ConfigError("simulation.rate must exceed 10x mode.f_res");
    }
    if (!(simulation.rbw > 0.0)) throw ConfigError("simulation.rbw must be positive");
    if (noise_budget.powers.empty()) throw ConfigError("noise_budget.powers must not be empty");
    for (double p : noise_budget.powers) {
        if (!(p > 0.0)) throw ConfigError("noise_budget.powers must be positive");
    }
    if (!(noise_budget.f_min > 0.0 && noise_budget.f_max > noise_budget.f_min)) {
        throw ConfigError("noise_budget frequency range must satisfy 0 < f_min < f_max");
    }
    if (noise_budget.points < 2) throw ConfigError("noise_budget.points must be at least 2");
    if (noise_budget.dark_noise_psd < 0.0) throw ConfigError("noise_budget.dark_noise_psd must be >= 0");
    if (theta_scan.steps < 4) throw ConfigError("theta_scan.steps must be at least 4");
    if (!(theta_scan.step_duration > 0.0) || !(theta_scan.rbw > 0.0) || !(theta_scan.turns > 0.0)) {
        throw ConfigError("theta_scan durations, rbw and turns must be positive");
    }
    if (theta_scan.drive_scale < 0.0) throw ConfigError("theta_scan.drive_scale must be >= 0");
    if (spectra.angles.empty()) throw ConfigError("spectra.angles must not be empty");
    if (!(spectra.rbw > 0.0)) throw ConfigError("spectra.rbw must be positive");
    if (tomography.angles < 8) throw ConfigError("tomography.angles must be at least 8");
    if (tomography.samples < 100) throw ConfigError("tomography.samples must be at least 100");
    if (tomography.membrane_to_shot < 0.0) throw ConfigError("tomography.membrane_to_shot must be >= 0");
    if (!(tomography.bin_width > 0.0 && tomography.grid_step > 0.0 && tomography.grid_half_width > 0.0)) {
        throw ConfigError("tomography bin width and grid must be positive");
    }
    if (!(tomography.cutoff_fraction > 0.0 && tomography.cutoff_fraction <= 1.0)) {
        throw ConfigError("tomography.cutoff_fraction must lie in (0, 1]");
    }
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig config;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        try {
            it->second(config, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + " (" + std::string(key) + "): " + e.what());
        }
    }
    config.interferometer.membrane_amplitude_reflectivity = std::sqrt(config.membrane.power_reflectivity);
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [key, setter] : setters()) keys.push_back(key);
    return keys;
}

}  // namespace optotomo
