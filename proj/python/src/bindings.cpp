// Python bindings for the optotomo core.

#include <algorithm>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "optotomo/config.hpp"
#include "optotomo/errors.hpp"
#include "optotomo/homodyne.hpp"
#include "optotomo/interferometer.hpp"
#include "optotomo/physics.hpp"
#include "optotomo/scenarios.hpp"
#include "optotomo/spectra.hpp"
#include "optotomo/timeseries.hpp"
#include "optotomo/tomography.hpp"

namespace py = pybind11;
using namespace optotomo;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

py::dict report_dict(const RunReport& report) {
    py::dict out;
    out["scenario"] = report.scenario;
    out["passed"] = report.all_passed();
    py::list entries;
    for (const auto& e : report.entries) {
        py::dict d;
        d["name"] = e.name;
        d["value"] = e.value;
        d["unit"] = e.unit;
        d["reference"] = e.reference ? py::cast(*e.reference) : py::none();
        d["tolerance"] = e.tolerance;
        d["passed"] = e.passed ? py::cast(*e.passed) : py::none();
        entries.append(d);
    }
    out["entries"] = entries;
    out["text"] = report.render();
    return out;
}

py::dict files_dict(const std::vector<OutputFile>& files) {
    py::dict out;
    for (const auto& f : files) out[py::str(f.name)] = f.content;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Opto-mechanical homodyne readout: noise budget, synthesis, spectra, tomography";

    // Exception hierarchy mirrors the C++ one.
    static py::exception<Error> base(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<UnsatisfiableError>(m, "UnsatisfiableError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<ValidityError>(m, "ValidityError", base.ptr());
    py::register_exception<ReconstructionError>(m, "ReconstructionError", base.ptr());
    py::register_exception<PhysicalityError>(m, "PhysicalityError", base.ptr());
    py::register_exception<CoverageError>(m, "CoverageError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
    py::register_exception<DynamicRangeError>(m, "DynamicRangeError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    // physics
    py::class_<MembraneOptics>(m, "MembraneOptics")
        .def(py::init<>())
        .def_readwrite("refractive_index", &MembraneOptics::refractive_index)
        .def_readwrite("thickness", &MembraneOptics::thickness)
        .def_readwrite("side_length", &MembraneOptics::side_length)
        .def_readwrite("density", &MembraneOptics::density)
        .def_readwrite("power_reflectivity", &MembraneOptics::power_reflectivity)
        .def_readwrite("reflectivity_tolerance", &MembraneOptics::reflectivity_tolerance)
        .def("validate", py::overload_cast<>(&MembraneOptics::validate, py::const_))
        .def("validate", py::overload_cast<double>(&MembraneOptics::validate, py::const_), py::arg("wavelength"));

    py::class_<MechanicalMode>(m, "MechanicalMode")
        .def(py::init<>())
        .def(py::init([](double f, double q, double mass, double temperature) {
                 return MechanicalMode{f, q, mass, temperature};
             }),
             py::arg("resonance_frequency") = 133.88e3, py::arg("quality_factor") = 6e5,
             py::arg("effective_mass") = 80e-12, py::arg("temperature") = 300.0)
        .def_readwrite("resonance_frequency", &MechanicalMode::resonance_frequency)
        .def_readwrite("quality_factor", &MechanicalMode::quality_factor)
        .def_readwrite("effective_mass", &MechanicalMode::effective_mass)
        .def_readwrite("temperature", &MechanicalMode::temperature)
        .def("validate", &MechanicalMode::validate)
        .def("angular_frequency", &MechanicalMode::angular_frequency)
        .def("damping_rate", &MechanicalMode::damping_rate);

    py::enum_<DampingModel>(m, "DampingModel")
        .value("velocity", DampingModel::velocity)
        .value("structural", DampingModel::structural);

    m.def("membrane_reflectivity", &membrane_reflectivity, py::arg("refractive_index"), py::arg("thickness"),
          py::arg("wavelength") = 1064e-9);
    m.def("max_slab_reflectivity", &max_slab_reflectivity, py::arg("refractive_index"));
    m.def("infer_thickness", &infer_thickness, py::arg("power_reflectivity"), py::arg("refractive_index"),
          py::arg("wavelength") = 1064e-9);
    m.def("effective_mass", &effective_mass, py::arg("membrane"));
    m.def("mech_susceptibility", &mech_susceptibility, py::arg("frequency"), py::arg("mode"));
    m.def("thermal_psd", &thermal_psd, py::arg("frequency"), py::arg("mode"),
          py::arg("damping") = DampingModel::velocity);
    m.def("sql_psd", &sql_psd, py::arg("frequency"), py::arg("mode"));
    m.def("sql_peak_asd", &sql_peak_asd, py::arg("mode"));
    m.def("thermal_variance", &thermal_variance, py::arg("mode"));

    // interferometer
    py::class_<InterferometerConfig>(m, "InterferometerConfig")
        .def(py::init<>())
        .def_readwrite("wavelength", &InterferometerConfig::wavelength)
        .def_readwrite("input_power", &InterferometerConfig::input_power)
        .def_readwrite("lo_power", &InterferometerConfig::lo_power)
        .def_readwrite("membrane_amplitude_reflectivity", &InterferometerConfig::membrane_amplitude_reflectivity)
        .def_readwrite("dark_port_contrast_defect", &InterferometerConfig::dark_port_contrast_defect)
        .def("validate", &InterferometerConfig::validate);

    py::class_<EfficiencyBudget>(m, "EfficiencyBudget")
        .def(py::init<double, double>(), py::arg("detector_quantum_efficiency"), py::arg("optical_path_efficiency"))
        .def_property_readonly("detector_quantum_efficiency", &EfficiencyBudget::detector_quantum_efficiency)
        .def_property_readonly("optical_path_efficiency", &EfficiencyBudget::optical_path_efficiency)
        .def("total", &EfficiencyBudget::total);

    m.def("overall_efficiency", &overall_efficiency, py::arg("quantum_efficiency"), py::arg("optical_efficiency"));
    m.def("displacement_to_output_gain", &displacement_to_output_gain, py::arg("config"));
    m.def("shot_imprecision_psd", &shot_imprecision_psd, py::arg("frequency"), py::arg("config"),
          py::arg("efficiency"));
    m.def("total_readout_psd", &total_readout_psd, py::arg("frequency"), py::arg("mode"), py::arg("config"),
          py::arg("efficiency"), py::arg("dark_noise_psd") = 0.0);

    // homodyne
    py::class_<HomodyneConfig>(m, "HomodyneConfig")
        .def(py::init<>())
        .def_readwrite("angle", &HomodyneConfig::angle)
        .def_readwrite("lo_amplitude", &HomodyneConfig::lo_amplitude)
        .def_readwrite("pm_frequency", &HomodyneConfig::pm_frequency)
        .def_readwrite("lock_target", &HomodyneConfig::lock_target)
        .def_readwrite("signal_power", &HomodyneConfig::signal_power)
        .def("validate", &HomodyneConfig::validate);

    py::class_<QuadratureSamples>(m, "QuadratureSamples")
        .def_readonly("angle", &QuadratureSamples::angle)
        .def_readonly("sample_rate", &QuadratureSamples::sample_rate)
        .def_readonly("seed", &QuadratureSamples::seed)
        .def_property_readonly("values", [](const QuadratureSamples& s) { return to_numpy(s.values); });

    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<Eigen::Vector2d, Eigen::Matrix2d>(), py::arg("mean"), py::arg("covariance"))
        .def_static("vacuum", &GaussianState::vacuum)
        .def_static("thermal", &GaussianState::thermal, py::arg("variance"))
        .def_property_readonly("mean", &GaussianState::mean)
        .def_property_readonly("covariance", &GaussianState::covariance);

    m.def("theta_scan_power", &theta_scan_power, py::arg("theta"), py::arg("shot_power"), py::arg("membrane_power"));
    m.def("pm_lock_error_signal", &pm_lock_error_signal, py::arg("theta"), py::arg("config"));
    m.def("pm_lock_error_slope", &pm_lock_error_slope, py::arg("theta"), py::arg("config"));
    m.def("variance_vs_theta", py::overload_cast<const Eigen::Matrix2d&, double>(&variance_vs_theta),
          py::arg("covariance"), py::arg("theta"));
    m.def("variance_vs_theta", py::overload_cast<const GaussianState&, double>(&variance_vs_theta),
          py::arg("state"), py::arg("theta"));
    m.def("sample_quadrature", &sample_quadrature, py::arg("state"), py::arg("theta"), py::arg("count"),
          py::arg("seed"));

    // tomography
    py::class_<CovarianceFit>(m, "CovarianceFit")
        .def_readonly("covariance", &CovarianceFit::covariance)
        .def_readonly("residual_rms", &CovarianceFit::residual_rms)
        .def_readonly("distinct_angles", &CovarianceFit::distinct_angles)
        .def("determinant", &CovarianceFit::determinant)
        .def("satisfies_uncertainty", &CovarianceFit::satisfies_uncertainty, py::arg("tolerance") = 0.0);

    m.def(
        "reconstruct_covariance",
        [](const std::vector<double>& thetas, const std::vector<double>& variances) {
            if (thetas.size() != variances.size()) throw PreconditionError("thetas and variances differ in length");
            std::vector<AngleVariance> scan;
            for (std::size_t i = 0; i < thetas.size(); ++i) scan.push_back({thetas[i], variances[i]});
            return reconstruct_covariance(scan);
        },
        py::arg("thetas"), py::arg("variances"));

    py::class_<QuadratureHistogram>(m, "QuadratureHistogram")
        .def_readonly("theta", &QuadratureHistogram::theta)
        .def_readonly("lower_edge", &QuadratureHistogram::lower_edge)
        .def_readonly("bin_width", &QuadratureHistogram::bin_width)
        .def_property_readonly("counts", [](const QuadratureHistogram& h) { return to_numpy(h.counts); })
        .def("total", &QuadratureHistogram::total);
    m.def("make_histogram", &make_histogram, py::arg("samples"), py::arg("half_range"), py::arg("bin_width"));

    py::class_<PhaseSpaceGrid>(m, "PhaseSpaceGrid")
        .def(py::init([](double hw, double step) { return PhaseSpaceGrid{hw, step}; }), py::arg("half_width") = 5.0,
             py::arg("step") = 0.1)
        .def_readwrite("half_width", &PhaseSpaceGrid::half_width)
        .def_readwrite("step", &PhaseSpaceGrid::step)
        .def("points", &PhaseSpaceGrid::points)
        .def("coordinate", &PhaseSpaceGrid::coordinate, py::arg("index"));

    py::class_<GaussianSurface>(m, "GaussianSurface")
        .def_readonly("amplitude", &GaussianSurface::amplitude)
        .def_readonly("mean", &GaussianSurface::mean)
        .def_readonly("covariance", &GaussianSurface::covariance)
        .def_readonly("points_used", &GaussianSurface::points_used);

    py::class_<WignerMap>(m, "WignerMap")
        .def_readonly("grid", &WignerMap::grid)
        .def_property_readonly("values",
                               [](const WignerMap& w) {
                                   const auto n = static_cast<py::ssize_t>(w.size());
                                   py::array_t<double> out({n, n});
                                   std::copy(w.values.begin(), w.values.end(), out.mutable_data());
                                   return out;
                               })
        .def("integral", &WignerMap::integral)
        .def("mean", &WignerMap::mean)
        .def("covariance", &WignerMap::covariance)
        .def("peak", &WignerMap::peak)
        .def("fit_gaussian", &WignerMap::fit_gaussian, py::arg("threshold") = 0.05);

    m.def(
        "wigner_backprojection",
        [](const std::vector<QuadratureHistogram>& histograms, const PhaseSpaceGrid& grid, double cutoff_fraction,
           std::size_t threads) {
            py::gil_scoped_release release;
            return wigner_backprojection(histograms, grid, BackprojectionOptions{cutoff_fraction, threads});
        },
        py::arg("histograms"), py::arg("grid"), py::arg("cutoff_fraction") = 1.0, py::arg("threads") = 1);

    // time series and spectra
    py::enum_<SignalUnit>(m, "SignalUnit")
        .value("metres", SignalUnit::metres)
        .value("shot_noise_units", SignalUnit::shot_noise_units);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                         double sample_rate, SignalUnit unit) {
                 TimeSeries ts;
                 ts.values = from_numpy(values);
                 ts.sample_rate = sample_rate;
                 ts.unit = unit;
                 return ts;
             }),
             py::arg("values"), py::arg("sample_rate"), py::arg("unit") = SignalUnit::shot_noise_units)
        .def_readonly("sample_rate", &TimeSeries::sample_rate)
        .def_readonly("seed", &TimeSeries::seed)
        .def_readonly("unit", &TimeSeries::unit)
        .def("duration", &TimeSeries::duration)
        .def_property_readonly("values", [](const TimeSeries& t) { return to_numpy(t.values); });

    py::class_<CalibrationMarker>(m, "CalibrationMarker")
        .def(py::init([](double f, double a) { return CalibrationMarker{f, a}; }), py::arg("frequency"),
             py::arg("displacement_amplitude"))
        .def_readwrite("frequency", &CalibrationMarker::frequency)
        .def_readwrite("displacement_amplitude", &CalibrationMarker::displacement_amplitude);

    m.def(
        "synthesize_membrane_motion",
        [](const MechanicalMode& mode, double duration, double rate, std::uint64_t seed) {
            py::gil_scoped_release release;
            return synthesize_membrane_motion(mode, duration, rate, seed);
        },
        py::arg("mode"), py::arg("duration"), py::arg("sample_rate"), py::arg("seed"));
    m.def("add_marker", [](TimeSeries ts, const CalibrationMarker& marker) {
        add_marker(ts, marker);
        return ts;
    }, py::arg("displacement"), py::arg("marker"));
    m.def("detector_scale", &detector_scale, py::arg("config"), py::arg("efficiency"), py::arg("sample_rate"));
    m.def("synthesize_detector_output", &synthesize_detector_output, py::arg("displacement"), py::arg("config"),
          py::arg("efficiency"), py::arg("homodyne"), py::arg("seed"));

    py::class_<SpectralDensity>(m, "SpectralDensity")
        .def_property_readonly("frequencies", [](const SpectralDensity& s) { return to_numpy(s.frequencies); })
        .def_property_readonly("values", [](const SpectralDensity& s) { return to_numpy(s.values); })
        .def_property_readonly("unit", [](const SpectralDensity& s) { return unit_label(s.unit); })
        .def_readonly("rbw", &SpectralDensity::rbw)
        .def_readonly("averages", &SpectralDensity::averages);

    m.def("welch_psd", [](const TimeSeries& ts, double rbw, double overlap) {
        return welch_psd(ts, rbw, Window::hann, overlap);
    }, py::arg("series"), py::arg("rbw"), py::arg("overlap") = 0.5);
    m.def("band_power", &band_power, py::arg("psd"), py::arg("f_lo"), py::arg("f_hi"));
    m.def(
        "calibrate_displacement",
        [](const SpectralDensity& psd, const CalibrationMarker& marker, double min_snr) {
            const auto cal = calibrate_displacement(psd, marker, min_snr);
            return py::make_tuple(cal.psd, cal.factor, cal.snr);
        },
        py::arg("psd"), py::arg("marker"), py::arg("min_snr") = 10.0);

    py::class_<LowPassTransfer>(m, "LowPassTransfer")
        .def(py::init([](double corner, double quality) { return LowPassTransfer{corner, quality}; }),
             py::arg("corner") = 25e6, py::arg("quality") = 0.7071067811865476)
        .def("__call__", &LowPassTransfer::operator(), py::arg("frequency"));
    m.def("detector_transfer_normalize", [](const SpectralDensity& psd, const LowPassTransfer& h, double floor) {
        return detector_transfer_normalize(psd, h, floor);
    }, py::arg("psd"), py::arg("transfer"), py::arg("floor") = 1e-6);
    m.def("apply_transfer", [](const TimeSeries& ts, const LowPassTransfer& h) { return apply_transfer(ts, h); },
          py::arg("series"), py::arg("transfer"));

    // scenarios
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("membrane", &ScenarioConfig::membrane)
        .def_readwrite("mode", &ScenarioConfig::mode)
        .def_readwrite("interferometer", &ScenarioConfig::interferometer)
        .def_readwrite("homodyne", &ScenarioConfig::homodyne)
        .def_property(
            "seed", [](const ScenarioConfig& c) { return c.simulation.seed; },
            [](ScenarioConfig& c, std::uint64_t s) { c.simulation.seed = s; })
        .def("validate", &ScenarioConfig::validate);
    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_keys", &config_keys);

    m.def("run_noise_budget", [](const ScenarioConfig& c) {
        const auto r = run_noise_budget(c);
        py::dict out;
        out["frequencies"] = to_numpy(r.frequencies);
        out["thermal"] = to_numpy(r.thermal);
        out["sql"] = to_numpy(r.sql);
        py::dict shot, total;
        for (std::size_t i = 0; i < r.power_labels.size(); ++i) {
            shot[py::str(r.power_labels[i])] = to_numpy(r.shot[i]);
            total[py::str(r.power_labels[i])] = to_numpy(r.total[i]);
        }
        out["shot"] = shot;
        out["total"] = total;
        out["report"] = report_dict(r.report);
        out["files"] = files_dict(r.files(true));
        return out;
    }, py::arg("config"));
    m.def("run_theta_scan", [](const ScenarioConfig& c) {
        ThetaScanResult r;
        {
            py::gil_scoped_release release;
            r = run_theta_scan(c);
        }
        py::dict out;
        out["thetas"] = to_numpy(r.thetas);
        out["powers"] = to_numpy(r.powers);
        out["shot_trace"] = to_numpy(r.shot_trace);
        out["report"] = report_dict(r.report);
        out["files"] = files_dict(r.files(true));
        return out;
    }, py::arg("config"));
    m.def("run_spectra", [](const ScenarioConfig& c) {
        SpectraResult r;
        {
            py::gil_scoped_release release;
            r = run_spectra(c);
        }
        py::dict out;
        out["angles"] = r.angles;
        out["psds"] = r.psds;
        out["peak_levels"] = r.peak_levels;
        out["report"] = report_dict(r.report);
        out["files"] = files_dict(r.files(true));
        return out;
    }, py::arg("config"));
    m.def("run_tomography", [](const ScenarioConfig& c, std::size_t threads) {
        TomographyResult r;
        {
            py::gil_scoped_release release;
            r = run_tomography(c, threads);
        }
        py::dict out;
        out["fit"] = r.fit;
        out["wigner"] = r.wigner;
        out["report"] = report_dict(r.report);
        out["files"] = files_dict(r.files(true));
        return out;
    }, py::arg("config"), py::arg("threads") = 1);
}
