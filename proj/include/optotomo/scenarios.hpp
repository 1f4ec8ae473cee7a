#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "optotomo/config.hpp"
#include "optotomo/output.hpp"
#include "optotomo/spectra.hpp"
#include "optotomo/tomography.hpp"

namespace optotomo {

/// Experimental reference numbers the reports compare against.
inline constexpr double kReportedImprecisionAsd = 1.9e-16;  // m/sqrt(Hz) at 200 mW
inline constexpr double kReportedSqlMargin = 8.2;

/// Named output file and its contents.
struct OutputFile {
    std::string name;
    std::string content;
};

struct NoiseBudgetResult {
    std::vector<double> frequencies;
    std::vector<double> thermal;
    std::vector<double> sql;
    std::vector<std::vector<double>> shot;   // per configured power
    std::vector<std::vector<double>> total;  // per configured power
    std::vector<std::string> power_labels;   // e.g. "200mW"
    RunReport report;

    std::vector<OutputFile> files(bool with_svg) const;
};

NoiseBudgetResult run_noise_budget(const ScenarioConfig& config);

struct ThetaScanResult {
    std::vector<double> times;
    std::vector<double> thetas;
    std::vector<double> powers;
    std::vector<double> shot_trace;  // independent run with the signal port blocked
    std::vector<double> model;
    double fitted_shot = 0.0;
    double fitted_membrane = 0.0;
    double residual_rms = 0.0;
    double shot_mean = 0.0;
    double shot_sigma = 0.0;
    RunReport report;

    std::vector<OutputFile> files(bool with_svg) const;
};

ThetaScanResult run_theta_scan(const ScenarioConfig& config);

struct SpectraResult {
    std::vector<double> angles;
    std::vector<SpectralDensity> psds;             // detector units
    std::vector<SpectralDensity> calibrated;       // m^2/Hz, empty without a marker
    std::vector<double> peak_levels;               // mean PSD within one linewidth of f_res
    std::vector<double> model_peak_levels;
    RunReport report;

    std::vector<OutputFile> files(bool with_svg) const;
};

SpectraResult run_spectra(const ScenarioConfig& config);

struct TomographyResult {
    GaussianState truth = GaussianState::vacuum();
    std::vector<AngleVariance> scan;
    std::vector<QuadratureHistogram> histograms;
    CovarianceFit fit;
    std::vector<double> variance_standard_errors;  // of the fitted V11, V22, V12
    WignerMap wigner;
    GaussianSurface wigner_fit;
    RunReport report;

    std::vector<OutputFile> files(bool with_svg) const;
};

/// Throws ReconstructionError / PhysicalityError when the fit fails.
TomographyResult run_tomography(const ScenarioConfig& config, std::size_t threads = 1);

/// Least-squares fit of P(theta) = a + b cos^2(theta); returns {a, b, rms residual}.
std::vector<double> fit_cos2(const std::vector<double>& thetas, const std::vector<double>& powers);

}  // namespace optotomo
