#include "optotomo/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"
#include "optotomo/fft.hpp"

namespace optotomo {

std::string unit_label(PsdUnit unit) {
    switch (unit) {
        case PsdUnit::metres_squared_per_hz: return "m^2/Hz";
        case PsdUnit::shot_noise_units_squared_per_hz: return "snu^2/Hz";
    }
    return "?";
}

std::size_t SpectralDensity::nearest_bin(double frequency) const {
    const double df = bin_width();
    if (df <= 0.0) return 0;
    const auto k = static_cast<long long>(std::llround(frequency / df));
    return static_cast<std::size_t>(
        std::clamp<long long>(k, 0, static_cast<long long>(frequencies.size()) - 1));
}

SpectralDensity welch_psd(const TimeSeries& series, double rbw, Window window, double overlap) {
    (void)window;  // Hann is the only window.
    const double fs = series.sample_rate;
    const std::size_t n = series.values.size();
    if (!(rbw > 0.0) || !std::isfinite(rbw)) throw PreconditionError("rbw must be positive");
    if (!(overlap >= 0.0 && overlap <= 0.9)) throw PreconditionError("overlap must lie in [0, 0.9]");
    if (n == 0 || rbw < 2.0 / series.duration()) {
        throw PreconditionError("rbw " + std::to_string(rbw) + " Hz is unachievable for a " +
                                std::to_string(series.duration()) + " s record");
    }
    const auto seg = static_cast<std::size_t>(std::llround(kHannEnbwBins * fs / rbw));
    if (seg < 4) throw PreconditionError("rbw too coarse for the sample rate");
    if (seg > n) throw PreconditionError("segment longer than the record");
    const std::size_t hop =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(seg) * (1.0 - overlap))));
    const std::size_t segments = 1 + (n - seg) / hop;

    std::vector<double> win(seg);
    double win_sq = 0.0;
    for (std::size_t i = 0; i < seg; ++i) {
        win[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(seg)));
        win_sq += win[i] * win[i];
    }

    const std::size_t bins = seg / 2 + 1;
    std::vector<double> accum(bins, 0.0);
    std::vector<double> buffer(seg);
    RealFft fft(seg);
    for (std::size_t s = 0; s < segments; ++s) {
        const double* src = series.values.data() + s * hop;
        double mean = 0.0;
        for (std::size_t i = 0; i < seg; ++i) mean += src[i];
        mean /= static_cast<double>(seg);
        for (std::size_t i = 0; i < seg; ++i) buffer[i] = (src[i] - mean) * win[i];
        const auto spectrum = fft.forward(buffer);
        for (std::size_t k = 0; k < bins; ++k) accum[k] += std::norm(spectrum[k]);
    }

    SpectralDensity psd;
    psd.unit = series.unit == SignalUnit::metres ? PsdUnit::metres_squared_per_hz
                                                 : PsdUnit::shot_noise_units_squared_per_hz;
    psd.rbw = kHannEnbwBins * fs / static_cast<double>(seg);
    psd.averages = segments;
    psd.frequencies.resize(bins);
    psd.values.resize(bins);
    const double scale = 1.0 / (fs * win_sq * static_cast<double>(segments));
    for (std::size_t k = 0; k < bins; ++k) {
        psd.frequencies[k] = static_cast<double>(k) * fs / static_cast<double>(seg);
        const bool edge = k == 0 || (seg % 2 == 0 && k == bins - 1);
        psd.values[k] = (edge ? 1.0 : 2.0) * scale * accum[k];
    }
    return psd;
}

double band_power(const SpectralDensity& psd, double f_lo, double f_hi) {
    // Each bin owns [f_k - df/2, f_k + df/2]; partial cells count by overlap, so the
    // integrated bandwidth equals f_hi - f_lo rather than a whole number of bins.
    const double df = psd.bin_width();
    double sum = 0.0;
    for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
        const double lo = std::max(f_lo, psd.frequencies[k] - 0.5 * df);
        const double hi = std::min(f_hi, psd.frequencies[k] + 0.5 * df);
        if (hi > lo) sum += psd.values[k] * (hi - lo);
    }
    return sum;
}

ZeroSpanTrace zero_span_power(const TimeSeries& series, std::size_t segment_samples,
                              double f_center, double rbw) {
    if (!(f_center > 0.0) || f_center >= 0.5 * series.sample_rate) {
        throw PreconditionError("centre frequency must lie below Nyquist");
    }
    if (segment_samples == 0 || segment_samples > series.values.size()) {
        throw PreconditionError("invalid zero-span segment length");
    }
    // Resolve the RBW band with several bins, then integrate it (brick-wall RBW filter).
    constexpr double kBinsPerRbw = 4.0;
    ZeroSpanTrace trace;
    TimeSeries segment;
    segment.sample_rate = series.sample_rate;
    segment.seed = series.seed;
    segment.unit = series.unit;
    const std::size_t count = series.values.size() / segment_samples;
    for (std::size_t s = 0; s < count; ++s) {
        const auto first = series.values.begin() + static_cast<std::ptrdiff_t>(s * segment_samples);
        segment.values.assign(first, first + static_cast<std::ptrdiff_t>(segment_samples));
        const auto psd = welch_psd(segment, rbw / kBinsPerRbw);
        trace.times.push_back(static_cast<double>(s * segment_samples) / series.sample_rate);
        trace.powers.push_back(band_power(psd, f_center - 0.5 * rbw, f_center + 0.5 * rbw));
    }
    return trace;
}

DisplacementCalibration calibrate_displacement(const SpectralDensity& psd,
                                               const CalibrationMarker& marker,
                                               double min_snr) {
    if (!(marker.displacement_amplitude > 0.0)) {
        throw CalibrationError("marker displacement amplitude must be given and positive");
    }
    const double df = psd.bin_width();
    if (psd.frequencies.empty() || marker.frequency <= 0.0 ||
        marker.frequency > psd.frequencies.back()) {
        throw CalibrationError("marker frequency outside the spectrum");
    }
    constexpr long long kPeakHalfWidth = 3;   // Hann main lobe is +-2 bins
    constexpr long long kBackgroundInner = 5;
    constexpr long long kBackgroundOuter = 20;
    const auto centre = static_cast<long long>(psd.nearest_bin(marker.frequency));
    const auto last = static_cast<long long>(psd.values.size()) - 1;

    std::vector<double> background;
    for (long long d = kBackgroundInner; d <= kBackgroundOuter; ++d) {
        if (centre - d >= 1) background.push_back(psd.values[static_cast<std::size_t>(centre - d)]);
        if (centre + d <= last) background.push_back(psd.values[static_cast<std::size_t>(centre + d)]);
    }
    if (background.size() < 4) throw CalibrationError("not enough bins around the marker");
    std::nth_element(background.begin(), background.begin() + static_cast<std::ptrdiff_t>(background.size() / 2),
                     background.end());
    const double level = background[background.size() / 2];

    double peak = 0.0;
    long long used = 0;
    for (long long k = std::max(1LL, centre - kPeakHalfWidth); k <= std::min(last, centre + kPeakHalfWidth); ++k) {
        peak += psd.values[static_cast<std::size_t>(k)] - level;
        ++used;
    }
    peak *= df;
    const double noise = level * static_cast<double>(used) * df;
    const double snr = noise > 0.0 ? peak / noise : (peak > 0.0 ? INFINITY : 0.0);
    if (!(peak > 0.0) || snr < min_snr) {
        throw CalibrationError("calibration marker not found: SNR " + std::to_string(snr) +
                               " below threshold " + std::to_string(min_snr));
    }

    DisplacementCalibration cal;
    cal.marker_power = peak;
    cal.snr = snr;
    cal.factor = 0.5 * marker.displacement_amplitude * marker.displacement_amplitude / peak;
    cal.psd = psd;
    cal.psd.unit = PsdUnit::metres_squared_per_hz;
    for (double& v : cal.psd.values) v *= cal.factor;
    return cal;
}

std::complex<double> LowPassTransfer::operator()(double frequency) const {
    const double u = frequency / corner;
    return 1.0 / std::complex<double>(1.0 - u * u, u / quality);
}

SpectralDensity detector_transfer_normalize(const SpectralDensity& psd,
                                            const TransferFunction& transfer, double floor) {
    SpectralDensity out = psd;
    std::vector<std::size_t> bad;
    for (std::size_t k = 0; k < psd.values.size(); ++k) {
        const double gain = std::norm(transfer(psd.frequencies[k]));
        if (!(gain >= floor)) {
            bad.push_back(k);
            continue;
        }
        out.values[k] = psd.values[k] / gain;
    }
    if (!bad.empty()) {
        throw DynamicRangeError("|H(f)|^2 below floor in " + std::to_string(bad.size()) + " bins",
                                std::move(bad));
    }
    return out;
}

TimeSeries apply_transfer(const TimeSeries& series, const TransferFunction& transfer) {
    const std::size_t n = series.values.size();
    RealFft fft(n);
    const auto spectrum = fft.forward(series.values);
    std::vector<std::complex<double>> shaped(spectrum.begin(), spectrum.end());
    for (std::size_t k = 0; k < shaped.size(); ++k) {
        const double f = static_cast<double>(k) * series.sample_rate / static_cast<double>(n);
        shaped[k] *= transfer(f);
    }
    const auto filtered = fft.inverse(shaped);
    TimeSeries out = series;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = filtered[i] * inv_n;
    return out;
}

}  // namespace optotomo
