// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "optotomo/config.hpp"
#include "optotomo/interferometer.hpp"
#include "optotomo/physics.hpp"
#include "optotomo/scenarios.hpp"
#include "optotomo/spectra.hpp"
#include "optotomo/timeseries.hpp"
#include "optotomo/tomography.hpp"
#include "oracles.hpp"

using namespace optotomo;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [X]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool within(double value, double ref, double frac) { return std::abs(value - ref) <= frac * std::abs(ref); }

InterferometerConfig published_interferometer(double power = 0.2) {
    InterferometerConfig cfg;
    cfg.wavelength = 1064e-9;
    cfg.input_power = power;
    cfg.membrane_amplitude_reflectivity = std::sqrt(0.17);
    return cfg;
}

// eta = 0.5 split as quantum efficiency 0.7 x optics 0.5/0.7.
EfficiencyBudget published_efficiency() { return overall_efficiency(0.7, 0.5 / 0.7); }

double imprecision_asd() {
    return std::sqrt(shot_imprecision_psd(0.0, published_interferometer(), published_efficiency()));
}

Outcome c1() {
    Outcome o;
    const double asd = imprecision_asd();
    o.require(within(asd, 1.9e-16, 0.10), "ASD " + fmt("%.4e", asd) + " m/rtHz vs 1.9e-16 +-10%");
    return o;
}

Outcome c2() {
    Outcome o;
    MechanicalMode mode;
    mode.effective_mass = 80e-12;
    mode.quality_factor = 6e5;
    mode.resonance_frequency = 133.88e3;
    const double margin = sql_peak_asd(mode) / imprecision_asd();
    o.require(within(margin, 8.2, 0.15), "SQL peak / imprecision " + fmt("%.3f", margin) + " vs 8.2 +-15%");
    return o;
}

Outcome c3() {
    Outcome o;
    const double r = membrane_reflectivity(2.2, 40e-9, 1064e-9);
    o.require(r >= 0.15 && r <= 0.18, "R(40 nm) " + fmt("%.4f", r) + " in [0.15, 0.18]");
    const double t = infer_thickness(0.17, 2.2, 1064e-9);
    o.require(t >= 38e-9 && t <= 44e-9, "t(R=0.17) " + fmt("%.2f", t * 1e9) + " nm in [38, 44]");
    return o;
}

Outcome c4() {
    Outcome o;
    MembraneOptics m;
    m.side_length = 1.5e-3;
    m.thickness = 40e-9;
    m.density = 3100.0;
    const double mass = effective_mass(m);
    o.require(within(mass, 80e-12, 0.25), "m_eff " + fmt("%.2f", mass * 1e12) + " ng vs 80 ng +-25%");
    return o;
}

// Full pipeline at one input power: thermal membrane (published mode) + marker,
// homodyne at theta = 0, Welch, marker calibration, mean calibrated floor.
double simulated_floor_psd(double power, std::uint64_t seed) {
    const double fs = 1.5e6;
    MechanicalMode mode;
    auto x = synthesize_membrane_motion(mode, 0.5, fs, seed);
    const CalibrationMarker marker{128e3, 1e-12};
    add_marker(x, marker);
    HomodyneConfig hd;
    hd.angle = 0.0;
    const auto y = synthesize_detector_output(x, published_interferometer(power), published_efficiency(), hd, seed + 1);
    const auto cal = calibrate_displacement(welch_psd(y, 1e3), marker);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < cal.psd.values.size(); ++k) {
        if (cal.psd.frequencies[k] >= 300e3 && cal.psd.frequencies[k] <= 700e3) {
            sum += cal.psd.values[k];
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

Outcome c5() {
    Outcome o;
    const auto eta = published_efficiency();
    const double analytic = std::sqrt(shot_imprecision_psd(0.0, published_interferometer(0.02), eta) /
                                      shot_imprecision_psd(0.0, published_interferometer(0.2), eta));
    o.require(std::abs(analytic - std::sqrt(10.0)) <= 1e-12 * std::sqrt(10.0),
              "analytic 20/200 mW ASD ratio " + fmt("%.12f", analytic));
    const double f20 = simulated_floor_psd(0.02, 101);
    const double f50 = simulated_floor_psd(0.05, 202);
    const double f200 = simulated_floor_psd(0.2, 303);
    const double r10 = std::sqrt(f20 / f200);
    const double r4 = std::sqrt(f50 / f200);
    o.require(within(r10, std::sqrt(10.0), 0.05), "simulated 20/200 mW " + fmt("%.4f", r10) + " vs sqrt10 +-5%");
    o.require(within(r4, 2.0, 0.05), "simulated 50/200 mW " + fmt("%.4f", r4) + " vs sqrt4 +-5%");
    const double s200 = shot_imprecision_psd(0.0, published_interferometer(0.2), eta);
    o.require(within(f200, s200, 0.05), "calibrated 200 mW floor / S_imp " + fmt("%.4f", f200 / s200));
    return o;
}

Outcome c6() {
    Outcome o;
    auto config = load_config(std::string(OPTOTOMO_SOURCE_DIR) + "/configs/desk.conf");
    const auto r = run_theta_scan(config);
    o.require(r.residual_rms / r.fitted_membrane < 0.05,
              "cos^2 fit rms / P_mem " + fmt("%.4f", r.residual_rms / r.fitted_membrane) + " < 0.05");
    const double minimum = *std::min_element(r.powers.begin(), r.powers.end());
    const double z = (minimum - r.shot_mean) / r.shot_sigma;
    o.require(std::abs(z) <= 3.0, "trace minimum vs blocked-port shot mean " + fmt("%+.2f", z) + " sigma");
    return o;
}

Outcome c7() {
    Outcome o;
    MechanicalMode mode;
    mode.quality_factor = 100.0;
    const auto x = synthesize_membrane_motion(mode, 1.0, 1.5e6, 4242);
    double ms = 0.0;
    for (double v : x.values) ms += v * v;
    ms /= static_cast<double>(x.values.size());
    const double expected = oracle::kKb * mode.temperature /
                            (mode.effective_mass * std::pow(2.0 * oracle::kPi * mode.resonance_frequency, 2));
    o.require(within(ms, expected, 0.10), "<x^2> / kT/(m W^2) " + fmt("%.4f", ms / expected));

    std::mt19937_64 rng(77);
    std::normal_distribution<double> nd(0.0, 1.0);
    TimeSeries white;
    white.sample_rate = 1e6;
    white.values.resize(1 << 20);
    for (double& v : white.values) v = nd(rng);
    double var = 0.0;
    const double mean = std::accumulate(white.values.begin(), white.values.end(), 0.0) / white.values.size();
    for (double v : white.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(white.values.size() - 1);
    const double integral = band_power(welch_psd(white, 1e3), 0.0, 0.5e6);
    o.require(within(integral, var, 0.01), "Welch Parseval integral / variance " + fmt("%.5f", integral / var));
    return o;
}

Outcome c8() {
    Outcome o;
    Eigen::Matrix2d v;
    v << 2.0, 0.3, 0.3, 0.5;
    std::vector<AngleVariance> exact, sampled;
    const GaussianState state(Eigen::Vector2d::Zero(), v);
    const std::size_t n = 100000;
    for (int i = 0; i < 8; ++i) {
        const double th = oracle::kPi * i / 8.0;
        exact.push_back({th, variance_vs_theta(v, th)});
        const auto s = sample_quadrature(state, th, n, 8000 + i);
        const double m = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
        double ss = 0.0;
        for (double q : s.values) ss += (q - m) * (q - m);
        sampled.push_back({th, ss / (n - 1)});
    }
    const double err = (reconstruct_covariance(exact).covariance - v).cwiseAbs().maxCoeff();
    o.require(err < 1e-10, "noiseless max error " + fmt("%.1e", err));

    // Standard errors of (V11, V22, V12) from the per-angle variance errors 2 V^2/(n-1).
    Eigen::MatrixXd design(8, 3);
    Eigen::VectorXd w(8);
    for (int i = 0; i < 8; ++i) {
        const double c = std::cos(sampled[i].theta), s = std::sin(sampled[i].theta);
        design.row(i) << c * c, s * s, 2.0 * s * c;
        const double vi = variance_vs_theta(v, sampled[i].theta);
        w(i) = 2.0 * vi * vi / static_cast<double>(n - 1);
    }
    const Eigen::Matrix3d ninv = (design.transpose() * design).inverse();
    const Eigen::Matrix3d pcov = ninv * design.transpose() * w.asDiagonal() * design * ninv;
    const auto fit = reconstruct_covariance(sampled).covariance;
    const double z[] = {(fit(0, 0) - 2.0) / std::sqrt(pcov(0, 0)), (fit(1, 1) - 0.5) / std::sqrt(pcov(1, 1)),
                        (fit(0, 1) - 0.3) / std::sqrt(pcov(2, 2))};
    const double zmax = std::max({std::abs(z[0]), std::abs(z[1]), std::abs(z[2])});
    o.require(zmax <= 3.0, "Monte-Carlo max |error| " + fmt("%.2f", zmax) + " SE");

    std::vector<QuadratureHistogram> hists;
    for (int i = 0; i < 12; ++i) {
        const auto s = sample_quadrature(GaussianState::vacuum(), oracle::kPi * i / 12.0, 1000000, 9000 + i);
        hists.push_back(make_histogram(s, 6.0 * std::sqrt(2.0) + 0.2, 0.1));
    }
    const auto wig = wigner_backprojection(hists, PhaseSpaceGrid{6.0, 0.1});
    const auto g = wig.fit_gaussian();
    o.require(within(g.covariance(0, 0), 0.5, 0.05) && within(g.covariance(1, 1), 0.5, 0.05),
              "vacuum Wigner fitted variances " + fmt("%.4f", g.covariance(0, 0)) + "/" + fmt("%.4f", g.covariance(1, 1)));
    o.require(within(wig.integral(), 1.0, 0.02), "normalization " + fmt("%.4f", wig.integral()));
    return o;
}

Outcome c9() {
    Outcome o;
    const double fs = 64e6;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    TimeSeries shot;
    shot.sample_rate = fs;
    shot.unit = SignalUnit::shot_noise_units;
    shot.values.resize(std::size_t{1} << 24);
    for (double& v : shot.values) v = nd(rng);
    const LowPassTransfer h;
    const auto measured = apply_transfer(shot, h);
    const auto flat = detector_transfer_normalize(welch_psd(measured, 50e3), h);
    double worst = 0.0, sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < flat.values.size(); ++k) {
        const double f = flat.frequencies[k];
        if (f < 50e3 || f > 0.8 * h.corner) continue;
        worst = std::max(worst, std::abs(flat.values[k] * fs - 1.0));
        sum += flat.values[k] * fs;
        ++n;
    }
    o.require(worst <= 0.05, "max per-bin deviation from 1/fs over 50 kHz-20 MHz " + fmt("%.2f", 100 * worst) + "% (" +
                                 std::to_string(n) + " bins)");
    o.require(within(sum / n, 1.0, 0.01), "mean level x fs " + fmt("%.4f", sum / n));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"C1 shot-noise-limited displacement ASD", c1},
        {"C2 SQL margin", c2},
        {"C3 membrane optics", c3},
        {"C4 effective mass", c4},
        {"C5 power scaling", c5},
        {"C6 theta-scan", c6},
        {"C7 equipartition / Parseval", c7},
        {"C8 tomography round-trip", c8},
        {"C9 broadband flatness", c9},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = std::string("threw: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s: %s (%.1f s)\n", outcome.passed ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str(),
                    seconds);
        failures += outcome.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
