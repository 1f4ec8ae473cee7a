#include "approx.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "optotomo/errors.hpp"
#include "optotomo/spectra.hpp"
#include "oracles.hpp"

using namespace optotomo;

namespace {
TimeSeries white(std::size_t n, double fs, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, sigma);
    TimeSeries ts;
    ts.sample_rate = fs;
    ts.unit = SignalUnit::shot_noise_units;
    ts.values.resize(n);
    for (double& v : ts.values) v = nd(rng);
    return ts;
}

TimeSeries tone(std::size_t n, double fs, double f, double amplitude) {
    TimeSeries ts;
    ts.sample_rate = fs;
    ts.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) ts.values[i] = amplitude * std::sin(2.0 * oracle::kPi * f * i / fs);
    return ts;
}

// Direct O(N^2) Welch with a periodic Hann window, mean removal and 50 % overlap.
std::vector<double> brute_welch(const std::vector<double>& x, double fs, std::size_t seg) {
    const std::size_t hop = seg / 2;
    const std::size_t count = 1 + (x.size() - seg) / hop;
    std::vector<double> w(seg);
    double u = 0.0;
    for (std::size_t i = 0; i < seg; ++i) {
        w[i] = std::pow(std::sin(oracle::kPi * i / seg), 2);
        u += w[i] * w[i];
    }
    std::vector<double> out(seg / 2 + 1, 0.0);
    for (std::size_t s = 0; s < count; ++s) {
        double mean = 0.0;
        for (std::size_t i = 0; i < seg; ++i) mean += x[s * hop + i];
        mean /= seg;
        for (std::size_t k = 0; k < out.size(); ++k) {
            std::complex<double> acc = 0.0;
            for (std::size_t i = 0; i < seg; ++i) {
                acc += (x[s * hop + i] - mean) * w[i] * std::polar(1.0, -2.0 * oracle::kPi * k * i / seg);
            }
            const double one_sided = (k == 0 || k == seg / 2) ? 1.0 : 2.0;
            out[k] += one_sided * std::norm(acc) / (fs * u * count);
        }
    }
    return out;
}
}  // namespace

TEST_CASE("Welch matches a direct DFT estimate") {
    const double fs = 1000.0;
    const auto ts = white(1000, fs, 1.3, 2);
    const auto psd = welch_psd(ts, 15.0);  // 1.5 * 1000 / 15 = 100-sample segments
    const auto ref = brute_welch(ts.values, fs, 100);
    REQUIRE(psd.values.size() == ref.size());
    CHECK(psd.averages == 19);
    CHECK(psd.rbw == approx(15.0).epsilon(1e-12));
    CHECK(psd.bin_width() == approx(10.0).epsilon(1e-12));
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(psd.values[k] == approx(ref[k]).epsilon(1e-9));
}

TEST_CASE("white noise level and Parseval") {
    const double fs = 1e6, sigma = 0.7;
    const auto ts = white(1 << 20, fs, sigma, 9);
    const auto psd = welch_psd(ts, 1e3);
    const double level = 2.0 * sigma * sigma / fs;
    double mean = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 5; k + 5 < psd.values.size(); ++k, ++used) mean += psd.values[k];
    mean /= used;
    CHECK(mean == approx(level).epsilon(0.01));
    CHECK(band_power(psd, 0.0, fs / 2.0) == approx(sigma * sigma).epsilon(0.01));
    CHECK(psd.unit == PsdUnit::shot_noise_units_squared_per_hz);
    CHECK(unit_label(psd.unit) == "snu^2/Hz");
}

TEST_CASE("tone power is recovered") {
    const double fs = 1e6, rbw = 1e3;
    const double df = fs / std::llround(1.5 * fs / rbw);
    for (double f : {100.0 * df, 100.37 * df, 250.5 * df}) {
        const auto psd = welch_psd(tone(1 << 18, fs, f, 3e-12), rbw);
        CHECK(psd.unit == PsdUnit::metres_squared_per_hz);
        CHECK(band_power(psd, f - 4 * df, f + 4 * df) == approx(4.5e-24).epsilon(0.02));
    }
}

TEST_CASE("Welch rejects unachievable resolution") {
    const auto ts = white(1000, 1000.0, 1.0, 1);
    CHECK_THROWS_AS(welch_psd(ts, 1.0), PreconditionError);
    CHECK_THROWS_AS(welch_psd(ts, -5.0), PreconditionError);
    CHECK_THROWS_AS(welch_psd(ts, 15.0, Window::hann, 0.95), PreconditionError);
}

TEST_CASE("zero span tracks the power inside the RBW") {
    const double fs = 1e6;
    auto ts = tone(1 << 17, fs, 200e3, 1.0);
    const auto on = zero_span_power(ts, 1 << 14, 200e3, 10e3);
    REQUIRE(on.powers.size() == 8);
    for (double p : on.powers) CHECK(p == approx(0.5).epsilon(0.02));
    CHECK(on.times[1] == approx((1 << 14) / fs).epsilon(1e-12));
    const auto off = zero_span_power(ts, 1 << 14, 300e3, 10e3);
    for (double p : off.powers) CHECK(p < 1e-6);
    CHECK_THROWS_AS(zero_span_power(ts, 1 << 14, 600e3, 10e3), PreconditionError);
}

TEST_CASE("zero span of white noise is level times RBW") {
    const double fs = 1e6;
    const auto ts = white(1 << 20, fs, 1.0, 31);
    const auto trace = zero_span_power(ts, 1 << 16, 250e3, 20e3);
    double mean = 0.0;
    for (double p : trace.powers) mean += p;
    mean /= trace.powers.size();
    CHECK(mean == approx(2.0 / fs * 20e3).epsilon(0.05));
}

TEST_CASE("marker calibration recovers the detector scale") {
    const double fs = 1.5e6, scale = 3.7e11;
    auto x = tone(1 << 19, fs, 128e3, 1e-12);
    auto noise = white(x.values.size(), fs, 0.5, 12);
    TimeSeries y = noise;
    for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += scale * x.values[i];
    const auto psd = welch_psd(y, 1e3);
    const auto cal = calibrate_displacement(psd, CalibrationMarker{128e3, 1e-12});
    CHECK(cal.factor == approx(1.0 / (scale * scale)).epsilon(0.03));
    CHECK(cal.snr > 10.0);
    CHECK(cal.psd.unit == PsdUnit::metres_squared_per_hz);
    CHECK(cal.psd.values[40] == approx(psd.values[40] * cal.factor).epsilon(1e-12));

    CHECK_THROWS_AS(calibrate_displacement(psd, CalibrationMarker{128e3, 0.0}), CalibrationError);
    const auto bare = welch_psd(noise, 1e3);
    CHECK_THROWS_AS(calibrate_displacement(bare, CalibrationMarker{128e3, 1e-12}), CalibrationError);
    CHECK_THROWS_AS(calibrate_displacement(psd, CalibrationMarker{5e6, 1e-12}), CalibrationError);
}

TEST_CASE("low-pass transfer function") {
    const LowPassTransfer h;
    CHECK(std::abs(h(0.0)) == approx(1.0));
    CHECK(std::abs(h(25e6)) == approx(h.quality).epsilon(1e-12));
    // Butterworth: |H|^2 = 1 / (1 + (f/fc)^4).
    for (double f : {1e5, 5e6, 20e6, 60e6}) {
        CHECK(std::norm(h(f)) == approx(1.0 / (1.0 + std::pow(f / 25e6, 4))).epsilon(1e-12));
    }
}

TEST_CASE("transfer normalisation undoes the response and flags dead bins") {
    SpectralDensity psd;
    for (int k = 0; k < 100; ++k) {
        psd.frequencies.push_back(k * 1e6);
        psd.values.push_back(std::norm(LowPassTransfer{}(k * 1e6)));
    }
    const auto flat = detector_transfer_normalize(psd, LowPassTransfer{});
    for (double v : flat.values) CHECK(v == approx(1.0).epsilon(1e-12));

    const TransferFunction notch = [](double f) { return std::complex<double>(f == 3e6 || f == 7e6 ? 1e-4 : 1.0); };
    try {
        detector_transfer_normalize(psd, notch);
        FAIL("expected DynamicRangeError");
    } catch (const DynamicRangeError& e) {
        CHECK(e.bins == std::vector<std::size_t>{3, 7});
    }
}

TEST_CASE("apply_transfer filters tones by |H|") {
    const double fs = 64e6;
    const std::size_t n = 1 << 14;
    const double f = 1000.0 * fs / n;  // bin-centred
    const auto ts = tone(n, fs, f, 1.0);
    const auto out = apply_transfer(ts, LowPassTransfer{});
    const auto identity = apply_transfer(ts, [](double) { return std::complex<double>(1.0); });
    double p_in = 0.0, p_out = 0.0, err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p_in += ts.values[i] * ts.values[i];
        p_out += out.values[i] * out.values[i];
        err = std::max(err, std::abs(identity.values[i] - ts.values[i]));
    }
    CHECK(err < 1e-12);
    CHECK(p_out / p_in == approx(std::norm(LowPassTransfer{}(f))).epsilon(1e-9));
}
