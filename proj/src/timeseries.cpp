#include "optotomo/timeseries.hpp"

#include <cmath>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"

namespace optotomo {

std::string unit_label(SignalUnit unit) {
    switch (unit) {
        case SignalUnit::metres: return "m";
        case SignalUnit::shot_noise_units: return "snu";
    }
    return "?";
}

void CalibrationMarker::validate(const MechanicalMode& mode, double sample_rate) const {
    if (!(displacement_amplitude > 0.0) || !std::isfinite(displacement_amplitude)) {
        throw DomainError("marker displacement amplitude must be given and positive");
    }
    if (!(frequency > 0.0) || frequency >= 0.5 * sample_rate) {
        throw DomainError("marker frequency must lie inside the analysis band");
    }
    if (frequency == mode.resonance_frequency) {
        throw DomainError("marker frequency must be off resonance");
    }
}

MembraneSynthesizer::MembraneSynthesizer(const MechanicalMode& mode, double sample_rate,
                                         std::uint64_t seed,
                                         std::optional<OscillatorState> initial)
    : rate_(sample_rate), rng_(seed) {
    mode.validate();
    if (!(sample_rate > 0.0)) throw PreconditionError("sample rate must be positive");

    using ld = long double;
    const ld h = 1.0L / static_cast<ld>(sample_rate);
    const ld wm = static_cast<ld>(mode.angular_frequency());
    const ld gamma = std::isinf(mode.quality_factor)
                         ? 0.0L
                         : wm / static_cast<ld>(mode.quality_factor);
    const ld zeta = 0.5L * gamma;
    const ld wd = std::sqrt(wm * wm - zeta * zeta);  // Q > 1 keeps this real
    const ld decay = std::exp(-zeta * h);
    const ld c = std::cos(wd * h);
    const ld s = std::sin(wd * h);
    const ld p00 = decay * (c + zeta / wd * s);
    const ld p01 = decay * s / wd;
    const ld p10 = -decay * wm * wm / wd * s;
    const ld p11 = decay * (c - zeta / wd * s);
    phi_[0][0] = static_cast<double>(p00);
    phi_[0][1] = static_cast<double>(p01);
    phi_[1][0] = static_cast<double>(p10);
    phi_[1][1] = static_cast<double>(p11);

    // Stationary covariance diag(kT/(m wm^2), kT/m); the exact per-step noise covariance
    // is Sigma - Phi Sigma Phi^T.
    const ld kt = static_cast<ld>(PhysicalConstants::k_boltzmann * mode.temperature);
    const ld sxx = kt / (static_cast<ld>(mode.effective_mass) * wm * wm);
    const ld svv = kt / static_cast<ld>(mode.effective_mass);
    const ld q00 = sxx - (p00 * p00 * sxx + p01 * p01 * svv);
    const ld q01 = -(p00 * p10 * sxx + p01 * p11 * svv);
    const ld q11 = svv - (p10 * p10 * sxx + p11 * p11 * svv);
    const ld l00 = q00 > 0.0L ? std::sqrt(q00) : 0.0L;
    const ld l10 = l00 > 0.0L ? q01 / l00 : 0.0L;
    const ld rem = q11 - l10 * l10;
    const ld l11 = rem > 0.0L ? std::sqrt(rem) : 0.0L;
    noise_chol_[0] = static_cast<double>(l00);
    noise_chol_[1] = static_cast<double>(l10);
    noise_chol_[2] = static_cast<double>(l11);

    if (initial) {
        state_ = *initial;
    } else {
        state_.position = std::sqrt(static_cast<double>(sxx)) * normal_(rng_);
        state_.velocity = std::sqrt(static_cast<double>(svv)) * normal_(rng_);
    }
}

void MembraneSynthesizer::step() {
    const double z0 = normal_(rng_);
    const double z1 = normal_(rng_);
    const double x = phi_[0][0] * state_.position + phi_[0][1] * state_.velocity +
                     noise_chol_[0] * z0;
    const double v = phi_[1][0] * state_.position + phi_[1][1] * state_.velocity +
                     noise_chol_[1] * z0 + noise_chol_[2] * z1;
    state_.position = x;
    state_.velocity = v;
}

void MembraneSynthesizer::generate(std::span<double> out) {
    for (double& sample : out) {
        sample = state_.position;
        step();
    }
}

TimeSeries synthesize_membrane_motion(const MechanicalMode& mode, double duration,
                                      double sample_rate, std::uint64_t seed,
                                      const SynthesisOptions& options) {
    mode.validate();
    if (!(sample_rate > 10.0 * mode.resonance_frequency)) {
        throw PreconditionError("sample rate must exceed 10x the resonance frequency");
    }
    if (!(duration > 0.0)) throw PreconditionError("duration must be positive");
    TimeSeries ts;
    ts.sample_rate = sample_rate;
    ts.seed = seed;
    ts.unit = SignalUnit::metres;
    ts.values.resize(static_cast<std::size_t>(std::llround(duration * sample_rate)));
    MembraneSynthesizer synth(mode, sample_rate, seed, options.initial);
    synth.generate(ts.values);
    return ts;
}

std::optional<std::string> stationarity_warning(const MechanicalMode& mode, double duration) {
    const double ringdown = mode.quality_factor / mode.resonance_frequency;
    if (duration < ringdown) {
        return "duration " + std::to_string(duration) + " s is shorter than Q/f_res = " +
               std::to_string(ringdown) + " s; statistics from a non-stationary start are biased";
    }
    return std::nullopt;
}

void add_marker(TimeSeries& displacement, const CalibrationMarker& marker) {
    const double w = kTwoPi * marker.frequency / displacement.sample_rate;
    for (std::size_t i = 0; i < displacement.values.size(); ++i) {
        displacement.values[i] +=
            marker.displacement_amplitude * std::sin(w * static_cast<double>(i));
    }
}

double detector_scale(const InterferometerConfig& config, const EfficiencyBudget& efficiency,
                      double sample_rate) {
    return displacement_to_output_gain(config) * std::sqrt(2.0 * efficiency.total() / sample_rate);
}

TimeSeries synthesize_detector_output(const TimeSeries& displacement,
                                      const InterferometerConfig& config,
                                      const EfficiencyBudget& efficiency,
                                      const HomodyneConfig& homodyne, std::uint64_t seed) {
    if (displacement.unit != SignalUnit::metres) {
        throw PreconditionError("detector synthesis expects a displacement record in metres");
    }
    config.validate();
    homodyne.validate();
    const double gain = std::cos(homodyne.angle) *
                        detector_scale(config, efficiency, displacement.sample_rate);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> shot(0.0, std::sqrt(0.5));
    TimeSeries out;
    out.sample_rate = displacement.sample_rate;
    out.seed = seed;
    out.unit = SignalUnit::shot_noise_units;
    out.values.resize(displacement.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = gain * displacement.values[i] + shot(rng);
    }
    return out;
}

}  // namespace optotomo
