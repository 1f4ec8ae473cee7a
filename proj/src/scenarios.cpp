#include "optotomo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <Eigen/Dense>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"

namespace optotomo {

namespace {

// Independent, reproducible sub-stream seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string power_label(double watts) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%gmW", watts * 1e3);
    return buf;
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "+-%g%%", fraction * 100.0);
    return buf;
}

bool within(double value, double reference, double fraction) {
    return std::abs(value - reference) <= fraction * std::abs(reference);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::string psd_csv(const SpectralDensity& psd) {
    CsvTable table({"frequency_hz", "psd_value", "unit", "rbw_hz", "averages"});
    const std::string unit = unit_label(psd.unit);
    const std::string rbw = format_number(psd.rbw);
    const std::string averages = std::to_string(psd.averages);
    for (std::size_t k = 0; k < psd.values.size(); ++k) {
        table.add_row(std::vector<std::string>{format_number(psd.frequencies[k]),
                                               format_number(psd.values[k]), unit, rbw, averages});
    }
    return table.text();
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

}  // namespace

std::vector<double> fit_cos2(const std::vector<double>& thetas, const std::vector<double>& powers) {
    if (thetas.size() != powers.size() || thetas.size() < 2) {
        throw PreconditionError("cos^2 fit needs matching theta/power arrays of length >= 2");
    }
    Eigen::MatrixXd design(thetas.size(), 2);
    Eigen::VectorXd rhs(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double c = std::cos(thetas[i]);
        design(i, 0) = 1.0;
        design(i, 1) = c * c;
        rhs(i) = powers[i];
    }
    const Eigen::Vector2d p = design.colPivHouseholderQr().solve(rhs);
    const double rms = std::sqrt((design * p - rhs).squaredNorm() / static_cast<double>(thetas.size()));
    return {p(0), p(1), rms};
}

// ---------------------------------------------------------------------------------------------
// Noise budget

NoiseBudgetResult run_noise_budget(const ScenarioConfig& config) {
    config.validate();
    const auto& nb = config.noise_budget;
    const auto eff = config.efficiency();
    NoiseBudgetResult result;
    result.report.scenario = config.name + ":noise-budget";

    const double ratio = std::log(nb.f_max / nb.f_min) / static_cast<double>(nb.points - 1);
    for (std::size_t i = 0; i < nb.points; ++i) {
        const double f = nb.f_min * std::exp(ratio * static_cast<double>(i));
        result.frequencies.push_back(f);
        result.thermal.push_back(thermal_psd(f, config.mode));
        result.sql.push_back(sql_psd(f, config.mode));
    }
    std::vector<double> shot_levels;
    for (double power : nb.powers) {
        InterferometerConfig ifo = config.interferometer;
        ifo.input_power = power;
        const double level = shot_imprecision_psd(0.0, ifo, eff);
        shot_levels.push_back(level);
        result.shot.emplace_back(nb.points, level);
        result.power_labels.push_back(power_label(power));
        std::vector<double> total(nb.points);
        for (std::size_t i = 0; i < nb.points; ++i) {
            total[i] = total_readout_psd(result.frequencies[i], config.mode, ifo, eff, nb.dark_noise_psd);
        }
        result.total.push_back(std::move(total));
    }

    auto& report = result.report;
    for (std::size_t p = 0; p < nb.powers.size(); ++p) {
        ReportEntry entry{"shot ASD @ " + power_label(nb.powers[p]), std::sqrt(shot_levels[p]), "m/rtHz"};
        if (std::abs(nb.powers[p] - 0.2) < 1e-9) {
            entry.reference = kReportedImprecisionAsd;
            entry.tolerance = percent(0.10);
            entry.passed = within(entry.value, kReportedImprecisionAsd, 0.10);
        }
        report.add(entry);
    }
    const auto strongest = static_cast<std::size_t>(
        std::max_element(nb.powers.begin(), nb.powers.end()) - nb.powers.begin());
    const double best_asd = std::sqrt(shot_levels[strongest]);
    const double sql_peak = sql_peak_asd(config.mode);
    report.add({"SQL peak ASD", sql_peak, "m/rtHz"});
    ReportEntry margin{"SQL peak / shot ASD @ " + power_label(nb.powers[strongest]), sql_peak / best_asd, "1"};
    margin.reference = kReportedSqlMargin;
    margin.tolerance = percent(0.15);
    margin.passed = within(margin.value, kReportedSqlMargin, 0.15);
    report.add(margin);
    ReportEntry below{"imprecision below SQL peak", best_asd / sql_peak, "1"};
    below.tolerance = "< 1";
    below.passed = best_asd < sql_peak;
    report.add(below);
    report.add({"thermal PSD @ f_res", thermal_psd(config.mode.resonance_frequency, config.mode), "m^2/Hz"});
    report.add({"thermal ASD @ f_res", std::sqrt(thermal_psd(config.mode.resonance_frequency, config.mode)), "m/rtHz"});
    {
        InterferometerConfig ifo = config.interferometer;
        ifo.input_power = nb.powers[strongest];
        const double f = nb.evaluation_frequency;
        report.add({"total ASD @ " + format_number(f) + " Hz",
                    std::sqrt(total_readout_psd(f, config.mode, ifo, eff, nb.dark_noise_psd)), "m/rtHz"});
    }
    for (std::size_t p = 0; p + 1 < nb.powers.size(); ++p) {
        const double measured = std::sqrt(shot_levels[p] / shot_levels[p + 1]);
        const double expected = std::sqrt(nb.powers[p + 1] / nb.powers[p]);
        ReportEntry entry{"shot ASD ratio " + power_label(nb.powers[p]) + "/" + power_label(nb.powers[p + 1]),
                          measured, "1"};
        entry.reference = expected;
        entry.reference_provenance = "analytic sqrt(P2/P1)";
        entry.tolerance = "1e-12 rel";
        entry.passed = within(measured, expected, 1e-12);
        report.add(entry);
    }
    return result;
}

std::vector<OutputFile> NoiseBudgetResult::files(bool with_svg) const {
    std::vector<std::string> header{"frequency_hz", "thermal_m2_per_hz", "sql_m2_per_hz"};
    const auto& labels = power_labels;
    for (const auto& l : labels) header.push_back("shot_" + l + "_m2_per_hz");
    for (const auto& l : labels) header.push_back("total_" + l + "_m2_per_hz");
    CsvTable table(header);
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        std::vector<double> row{frequencies[i], thermal[i], sql[i]};
        for (const auto& s : shot) row.push_back(s[i]);
        for (const auto& t : total) row.push_back(t[i]);
        table.add_row(row);
    }
    std::vector<OutputFile> out{{"noise_budget.csv", table.text()},
                                {"noise_budget_report.txt", report.render()}};
    if (with_svg) {
        SvgPlot plot{"Displacement noise budget", "frequency [Hz]", "ASD [m/rtHz]", true, true, {}};
        auto asd = [](const std::vector<double>& psd) {
            std::vector<double> a(psd.size());
            std::transform(psd.begin(), psd.end(), a.begin(), [](double v) { return std::sqrt(v); });
            return a;
        };
        plot.series.push_back({"thermal", frequencies, asd(thermal), "#d62728"});
        plot.series.push_back({"SQL", frequencies, asd(sql), "#000000"});
        for (std::size_t p = 0; p < shot.size(); ++p) {
            plot.series.push_back({"shot " + labels[p], frequencies, asd(shot[p]), "#7f7f7f", true});
            plot.series.push_back({"total " + labels[p], frequencies, asd(total[p]), kPalette[p % 6]});
        }
        out.push_back({"noise_budget.svg", plot.render()});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Zero-span theta scan

ThetaScanResult run_theta_scan(const ScenarioConfig& config) {
    config.validate();
    const auto& ts = config.theta_scan;
    const double rate = config.simulation.sample_rate;
    const auto eff = config.efficiency();
    const double kappa = detector_scale(config.interferometer, eff, rate) * ts.drive_scale;
    const auto block = static_cast<std::size_t>(std::llround(ts.step_duration * rate));
    const auto steps = static_cast<std::size_t>(std::llround(static_cast<double>(ts.steps) * ts.turns));
    const double f_center = config.mode.resonance_frequency;
    const std::uint64_t seed = config.simulation.seed;

    MembraneSynthesizer synth(config.mode, rate, derive_seed(seed, 0));
    std::mt19937_64 shot_rng(derive_seed(seed, 1));
    std::mt19937_64 reference_rng(derive_seed(seed, 2));
    std::normal_distribution<double> shot(0.0, std::sqrt(0.5));

    ThetaScanResult result;
    result.report.scenario = config.name + ":theta-scan";
    std::vector<double> x(block);
    TimeSeries y{std::vector<double>(block), rate, seed, SignalUnit::shot_noise_units};
    for (std::size_t i = 0; i < steps; ++i) {
        const double theta = kTwoPi * static_cast<double>(i) / static_cast<double>(ts.steps);
        const double gain = std::cos(theta) * kappa;
        synth.generate(x);
        for (std::size_t n = 0; n < block; ++n) y.values[n] = gain * x[n] + shot(shot_rng);
        const auto trace = zero_span_power(y, block, f_center, ts.rbw);
        result.times.push_back(static_cast<double>(i * block) / rate);
        result.thetas.push_back(theta);
        result.powers.push_back(trace.powers.front());

        for (std::size_t n = 0; n < block; ++n) y.values[n] = shot(reference_rng);
        result.shot_trace.push_back(zero_span_power(y, block, f_center, ts.rbw).powers.front());
    }

    const auto fit = fit_cos2(result.thetas, result.powers);
    result.fitted_shot = fit[0];
    result.fitted_membrane = fit[1];
    result.residual_rms = fit[2];
    for (double theta : result.thetas) {
        result.model.push_back(theta_scan_power(theta, std::max(fit[0], 0.0), std::max(fit[1], 0.0)));
    }
    result.shot_mean = mean_of(result.shot_trace);
    result.shot_sigma = stddev_of(result.shot_trace);

    auto& report = result.report;
    report.add({"fitted shot band power", result.fitted_shot, "snu^2"});
    report.add({"fitted membrane band power", result.fitted_membrane, "snu^2"});
    report.add({"shot reference mean", result.shot_mean, "snu^2"});
    report.add({"shot reference sigma", result.shot_sigma, "snu^2"});
    const double minimum = *std::min_element(result.powers.begin(), result.powers.end());
    ReportEntry min_entry{"trace minimum", minimum, "snu^2"};
    min_entry.reference = result.shot_mean;
    min_entry.reference_provenance = "blocked-port run";
    min_entry.tolerance = "3 sigma";
    min_entry.passed = std::abs(minimum - result.shot_mean) <= 3.0 * result.shot_sigma;
    report.add(min_entry);
    if (ts.drive_scale > 0.0 && config.mode.temperature > 0.0) {
        ReportEntry residual{"cos^2 fit rms residual / P_mem", result.residual_rms / result.fitted_membrane, "1"};
        residual.tolerance = "< 5%";
        residual.passed = result.fitted_membrane > 0.0 && residual.value < 0.05;
        report.add(residual);
    } else {
        const double mean = mean_of(result.powers);
        ReportEntry flat{"undriven trace mean", mean, "snu^2"};
        flat.reference = result.shot_mean;
        flat.reference_provenance = "blocked-port run";
        flat.tolerance = "3 sigma of mean difference";
        flat.passed = std::abs(mean - result.shot_mean) <=
                      3.0 * result.shot_sigma * std::sqrt(2.0 / static_cast<double>(steps));
        report.add(flat);
    }
    return result;
}

std::vector<OutputFile> ThetaScanResult::files(bool with_svg) const {
    CsvTable table({"time_s", "theta_rad", "band_power_snu2", "model_snu2", "shot_reference_snu2"});
    for (std::size_t i = 0; i < times.size(); ++i) {
        table.add_row(std::vector<double>{times[i], thetas[i], powers[i], model[i], shot_trace[i]});
    }
    std::vector<OutputFile> out{{"theta_scan.csv", table.text()},
                                {"theta_scan_report.txt", report.render()}};
    if (with_svg) {
        SvgPlot plot{"Zero-span noise power versus readout angle", "theta [rad]", "band power [snu^2]",
                     false, true, {}};
        plot.series.push_back({"measured", thetas, powers, "#1f77b4"});
        plot.series.push_back({"model", thetas, model, "#2ca02c", true});
        plot.series.push_back({"shot noise", thetas, shot_trace, "#7f7f7f"});
        out.push_back({"theta_scan.svg", plot.render()});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Spectra at several readout angles

SpectraResult run_spectra(const ScenarioConfig& config) {
    config.validate();
    const double rate = config.simulation.sample_rate;
    const auto eff = config.efficiency();
    const std::uint64_t seed = config.simulation.seed;
    TimeSeries x = synthesize_membrane_motion(config.mode, config.simulation.duration, rate,
                                              derive_seed(seed, 0));
    x.seed = seed;
    const auto marker = config.marker();
    if (marker) add_marker(x, *marker);

    SpectraResult result;
    result.report.scenario = config.name + ":spectra";
    result.angles = config.spectra.angles;
    const double kappa = detector_scale(config.interferometer, eff, rate);
    const double f_res = config.mode.resonance_frequency;
    const double half_linewidth = 0.5 * f_res / config.mode.quality_factor;

    std::optional<double> factor;
    if (marker) {
        HomodyneConfig h = config.homodyne;
        h.angle = 0.0;
        const auto reference = synthesize_detector_output(x, config.interferometer, eff, h, derive_seed(seed, 100));
        factor = calibrate_displacement(welch_psd(reference, config.spectra.rbw), *marker).factor;
    }

    for (std::size_t i = 0; i < result.angles.size(); ++i) {
        HomodyneConfig h = config.homodyne;
        h.angle = result.angles[i];
        const auto y = synthesize_detector_output(x, config.interferometer, eff, h, derive_seed(seed, 10 + i));
        auto psd = welch_psd(y, config.spectra.rbw);
        const double c = std::cos(h.angle);
        double level = 0.0;
        double model = 0.0;
        std::size_t used = 0;
        const std::size_t centre = psd.nearest_bin(f_res);
        for (std::size_t k = 0; k < psd.values.size(); ++k) {
            const double f = psd.frequencies[k];
            if (k != centre && std::abs(f - f_res) > half_linewidth) continue;
            level += psd.values[k];
            model += c * c * kappa * kappa * thermal_psd(f, config.mode) + 1.0 / rate;
            ++used;
        }
        result.peak_levels.push_back(level / static_cast<double>(used));
        result.model_peak_levels.push_back(model / static_cast<double>(used));
        if (factor) {
            SpectralDensity cal = psd;
            cal.unit = PsdUnit::metres_squared_per_hz;
            for (double& v : cal.values) v *= *factor;
            result.calibrated.push_back(std::move(cal));
        }
        result.psds.push_back(std::move(psd));
    }

    auto& report = result.report;
    const double shot_level = 1.0 / rate;
    std::vector<std::size_t> order(result.angles.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(std::cos(result.angles[a])) > std::abs(std::cos(result.angles[b]));
    });
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        monotone = monotone && result.peak_levels[order[i]] >= result.peak_levels[order[i + 1]];
    }
    for (std::size_t i = 0; i < result.angles.size(); ++i) {
        ReportEntry entry{"peak PSD @ theta=" + format_number(result.angles[i]), result.peak_levels[i], "snu^2/Hz"};
        entry.reference = result.model_peak_levels[i];
        entry.reference_provenance = "thermal+shot model";
        const double c2 = std::pow(std::cos(result.angles[i]), 2);
        if (c2 > 1.0 - 1e-12) {
            entry.tolerance = percent(0.20);
            entry.passed = within(entry.value, entry.reference.value(), 0.20);
        } else if (c2 < 1e-12) {
            // Only shot noise remains; bound by the estimator scatter of the averaged bins.
            const double bins = std::max(1.0, 2.0 * half_linewidth / result.psds[i].bin_width());
            const double bound = 4.0 * std::sqrt(1.5 / (static_cast<double>(result.psds[i].averages) * bins)) + 0.01;
            entry.reference = shot_level;
            entry.reference_provenance = "shot level 1/fs";
            entry.tolerance = percent(bound);
            entry.passed = within(entry.value, shot_level, bound);
        }
        report.add(entry);
    }
    ReportEntry mono{"peak ordering monotone in |cos theta|", monotone ? 1.0 : 0.0, "bool"};
    mono.passed = monotone;
    report.add(mono);
    if (factor) report.add({"calibration factor", *factor, "m^2/snu^2"});
    return result;
}

std::vector<OutputFile> SpectraResult::files(bool with_svg) const {
    std::vector<OutputFile> out;
    for (std::size_t i = 0; i < psds.size(); ++i) {
        out.push_back({"spectra_theta_" + std::to_string(i) + ".csv", psd_csv(psds[i])});
        if (!calibrated.empty()) {
            out.push_back({"spectra_theta_" + std::to_string(i) + "_calibrated.csv", psd_csv(calibrated[i])});
        }
    }
    CsvTable angle_table({"index", "theta_rad", "peak_psd_snu2_per_hz", "model_peak_psd_snu2_per_hz"});
    for (std::size_t i = 0; i < angles.size(); ++i) {
        angle_table.add_row(std::vector<std::string>{std::to_string(i), format_number(angles[i]),
                                                     format_number(peak_levels[i]),
                                                     format_number(model_peak_levels[i])});
    }
    out.push_back({"spectra_angles.csv", angle_table.text()});
    out.push_back({"spectra_report.txt", report.render()});
    if (with_svg) {
        SvgPlot plot{"Homodyne spectra for several readout angles", "frequency [Hz]", "PSD [snu^2/Hz]",
                     false, true, {}};
        for (std::size_t i = 0; i < psds.size(); ++i) {
            plot.series.push_back({"theta=" + format_number(angles[i]).substr(0, 6), psds[i].frequencies,
                                   psds[i].values, kPalette[i % 6]});
        }
        out.push_back({"spectra.svg", plot.render()});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Tomography

TomographyResult run_tomography(const ScenarioConfig& config, std::size_t threads) {
    config.validate();
    const auto& tc = config.tomography;
    TomographyResult result;
    result.report.scenario = config.name + ":tomography";
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = 0.5 * (1.0 + tc.membrane_to_shot);
    cov(1, 1) = 0.5;
    result.truth = GaussianState(Eigen::Vector2d::Zero(), cov);

    const double half_range = tc.grid_half_width * std::sqrt(2.0) + 2.0 * tc.bin_width;
    for (std::size_t i = 0; i < tc.angles; ++i) {
        const double theta = kPi * static_cast<double>(i) / static_cast<double>(tc.angles);
        const auto samples = sample_quadrature(result.truth, theta, tc.samples,
                                               derive_seed(config.simulation.seed, 200 + i));
        const double m = mean_of(samples.values);
        double var = 0.0;
        for (double v : samples.values) var += (v - m) * (v - m);
        var /= static_cast<double>(samples.values.size() - 1);
        result.scan.push_back({theta, var});
        result.histograms.push_back(make_histogram(samples, half_range, tc.bin_width));
    }

    result.fit = reconstruct_covariance(result.scan);

    // Standard errors from the sample-variance scatter 2 V^2 / (n - 1), propagated through the fit.
    Eigen::MatrixXd design(result.scan.size(), 3);
    Eigen::VectorXd weights(result.scan.size());
    for (std::size_t i = 0; i < result.scan.size(); ++i) {
        const double c = std::cos(result.scan[i].theta);
        const double s = std::sin(result.scan[i].theta);
        design.row(static_cast<Eigen::Index>(i)) << c * c, s * s, 2.0 * s * c;
        const double v = variance_vs_theta(result.fit.covariance, result.scan[i].theta);
        weights(static_cast<Eigen::Index>(i)) = 2.0 * v * v / static_cast<double>(tc.samples - 1);
    }
    const Eigen::Matrix3d normal_inv = (design.transpose() * design).inverse();
    const Eigen::Matrix3d param_cov =
        normal_inv * design.transpose() * weights.asDiagonal() * design * normal_inv;
    for (int i = 0; i < 3; ++i) result.variance_standard_errors.push_back(std::sqrt(param_cov(i, i)));
    const Eigen::Vector3d grad(result.fit.covariance(1, 1), result.fit.covariance(0, 0),
                               -2.0 * result.fit.covariance(0, 1));
    const double det_se = std::sqrt(grad.dot(param_cov * grad));

    BackprojectionOptions options;
    options.cutoff_fraction = tc.cutoff_fraction;
    options.threads = threads;
    result.wigner = wigner_backprojection(result.histograms,
                                          PhaseSpaceGrid{tc.grid_half_width, tc.grid_step}, options);

    auto& report = result.report;
    const auto& fit = result.fit.covariance;
    const char* names[] = {"V11", "V22", "V12"};
    const double truth[] = {cov(0, 0), cov(1, 1), cov(0, 1)};
    const double fitted[] = {fit(0, 0), fit(1, 1), fit(0, 1)};
    for (int i = 0; i < 3; ++i) {
        ReportEntry entry{std::string("fitted ") + names[i], fitted[i], "snu^2"};
        entry.reference = truth[i];
        entry.reference_provenance = "generator ground truth";
        entry.tolerance = "3 SE (" + format_number(3.0 * result.variance_standard_errors[i]) + ")";
        entry.passed = std::abs(fitted[i] - truth[i]) <= 3.0 * result.variance_standard_errors[i];
        report.add(entry);
    }
    ReportEntry det{"det(covariance)", result.fit.determinant(), "snu^4"};
    det.reference = 0.25;
    det.reference_provenance = "uncertainty bound";
    det.tolerance = ">= 1/4 - 3 SE (" + format_number(3.0 * det_se) + ")";
    det.passed = result.fit.satisfies_uncertainty(3.0 * det_se);
    report.add(det);
    ReportEntry x1_excess{"V11 - V22 (membrane excess)", fit(0, 0) - fit(1, 1), "snu^2"};
    report.add(x1_excess);
    ReportEntry norm{"Wigner normalization", result.wigner.integral(), "1"};
    norm.reference = 1.0;
    norm.reference_provenance = "probability";
    norm.tolerance = percent(0.02);
    norm.passed = within(norm.value, 1.0, 0.02);
    report.add(norm);
    result.wigner_fit = result.wigner.fit_gaussian();
    const double wig[] = {result.wigner_fit.covariance(0, 0), result.wigner_fit.covariance(1, 1)};
    for (int i = 0; i < 2; ++i) {
        ReportEntry entry{std::string("Wigner Gaussian-fit ") + names[i], wig[i], "snu^2"};
        entry.reference = truth[i];
        entry.reference_provenance = "generator ground truth";
        entry.tolerance = percent(0.05);
        entry.passed = within(wig[i], truth[i], 0.05);
        report.add(entry);
    }
    if (!result.fit.satisfies_uncertainty(3.0 * det_se)) {
        throw PhysicalityError("reconstructed state violates det >= 1/4 beyond statistical error",
                               fit(0, 0), fit(1, 1), fit(0, 1));
    }
    return result;
}

std::vector<OutputFile> TomographyResult::files(bool with_svg) const {
    CsvTable cov({"quantity", "value", "unit", "standard_error"});
    const auto& c = fit.covariance;
    cov.add_row(std::vector<std::string>{"V11", format_number(c(0, 0)), "snu^2", format_number(variance_standard_errors[0])});
    cov.add_row(std::vector<std::string>{"V22", format_number(c(1, 1)), "snu^2", format_number(variance_standard_errors[1])});
    cov.add_row(std::vector<std::string>{"V12", format_number(c(0, 1)), "snu^2", format_number(variance_standard_errors[2])});
    cov.add_row(std::vector<std::string>{"det", format_number(fit.determinant()), "snu^4", ""});
    cov.add_row(std::vector<std::string>{"wigner_integral", format_number(wigner.integral()), "1", ""});
    cov.add_row(std::vector<std::string>{"wigner_fit_V11", format_number(wigner_fit.covariance(0, 0)), "snu^2", ""});
    cov.add_row(std::vector<std::string>{"wigner_fit_V22", format_number(wigner_fit.covariance(1, 1)), "snu^2", ""});
    cov.add_row(std::vector<std::string>{"wigner_fit_V12", format_number(wigner_fit.covariance(0, 1)), "snu^2", ""});

    CsvTable scan_table({"theta_rad", "variance_snu2"});
    for (const auto& p : scan) scan_table.add_row(std::vector<double>{p.theta, p.variance});

    CsvTable hist({"theta_rad", "bin_center_snu", "count"});
    for (const auto& h : histograms) {
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            hist.add_row(std::vector<double>{h.theta, h.bin_center(i), h.counts[i]});
        }
    }

    CsvTable grid({"x1_snu", "x2_snu", "wigner_per_snu2"});
    const std::size_t n = wigner.size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t col = 0; col < n; ++col) {
            grid.add_row(std::vector<double>{wigner.grid.coordinate(col), wigner.grid.coordinate(r), wigner.at(r, col)});
        }
    }
    std::vector<OutputFile> out{{"tomography_covariance.csv", cov.text()},
                                {"tomography_scan.csv", scan_table.text()},
                                {"tomography_histograms.csv", hist.text()},
                                {"wigner.csv", grid.text()},
                                {"tomography_report.txt", report.render()}};
    if (with_svg) {
        // Cuts through the origin along x1 and x2.
        std::vector<double> axis(n), cut_x1(n), cut_x2(n);
        for (std::size_t i = 0; i < n; ++i) {
            axis[i] = wigner.grid.coordinate(i);
            cut_x1[i] = wigner.at(n / 2, i);
            cut_x2[i] = wigner.at(i, n / 2);
        }
        SvgPlot plot{"Reconstructed Wigner function cuts", "quadrature [snu]", "W", false, false, {}};
        plot.series.push_back({"W(x1, 0)", axis, cut_x1, "#1f77b4"});
        plot.series.push_back({"W(0, x2)", axis, cut_x2, "#d62728"});
        out.push_back({"tomography.svg", plot.render()});
    }
    return out;
}

}  // namespace optotomo
