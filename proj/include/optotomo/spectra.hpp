#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "optotomo/timeseries.hpp"

namespace optotomo {

enum class Window { hann };

/// Equivalent noise bandwidth of the periodic Hann window, in bins.
inline constexpr double kHannEnbwBins = 1.5;

enum class PsdUnit { metres_squared_per_hz, shot_noise_units_squared_per_hz };

std::string unit_label(PsdUnit unit);

/// One-sided PSD on a uniform grid starting at 0 Hz.
struct SpectralDensity {
    std::vector<double> frequencies;
    std::vector<double> values;
    PsdUnit unit = PsdUnit::shot_noise_units_squared_per_hz;
    double rbw = 0.0;
    std::size_t averages = 0;

    double bin_width() const { return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0; }
    std::size_t nearest_bin(double frequency) const;
};

/// Welch estimate with a Hann window whose segment length sets ENBW / T_seg = rbw.
SpectralDensity welch_psd(const TimeSeries& series, double rbw, Window window = Window::hann,
                          double overlap = 0.5);

/// Integral of the PSD over [f_lo, f_hi]; edge bins contribute by their overlap.
double band_power(const SpectralDensity& psd, double f_lo, double f_hi);

struct ZeroSpanTrace {
    std::vector<double> times;   // segment start times, s
    std::vector<double> powers;  // band power per segment
};

/// Band power in [f_center - rbw/2, f_center + rbw/2] for consecutive segments of
/// `segment_samples` samples.
ZeroSpanTrace zero_span_power(const TimeSeries& series, std::size_t segment_samples,
                              double f_center, double rbw);

struct DisplacementCalibration {
    SpectralDensity psd;          // m^2/Hz
    double factor = 0.0;          // m^2 per detector unit^2
    double marker_power = 0.0;    // background-subtracted detector-unit power in the marker peak
    double snr = 0.0;
};

/// Scales a detector-unit PSD so that the integrated marker peak equals a^2 / 2.
DisplacementCalibration calibrate_displacement(const SpectralDensity& psd,
                                               const CalibrationMarker& marker,
                                               double min_snr = 10.0);

using TransferFunction = std::function<std::complex<double>(double)>;

/// Second-order low-pass H(f) = 1 / (1 - (f/fc)^2 + i f / (Q fc)).
struct LowPassTransfer {
    double corner = 25e6;
    double quality = 0.7071067811865476;
    std::complex<double> operator()(double frequency) const;
};

/// Divides the PSD by |H(f)|^2. Throws DynamicRangeError if |H|^2 < floor in any bin.
SpectralDensity detector_transfer_normalize(const SpectralDensity& psd,
                                            const TransferFunction& transfer,
                                            double floor = 1e-6);

/// Circular frequency-domain filtering of a record through H(f).
TimeSeries apply_transfer(const TimeSeries& series, const TransferFunction& transfer);

}  // namespace optotomo
