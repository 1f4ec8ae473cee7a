#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "optotomo/homodyne.hpp"
#include "optotomo/interferometer.hpp"
#include "optotomo/physics.hpp"

namespace optotomo {

enum class SignalUnit { metres, shot_noise_units };

std::string unit_label(SignalUnit unit);

struct TimeSeries {
    std::vector<double> values;
    double sample_rate = 1.0;  // Hz
    std::uint64_t seed = 0;
    SignalUnit unit = SignalUnit::metres;

    double duration() const { return static_cast<double>(values.size()) / sample_rate; }
};

/// Injected piezo displacement used to calibrate the detector output in metres.
struct CalibrationMarker {
    double frequency = 128e3;           // Hz
    double displacement_amplitude = 0;  // m, must be supplied

    void validate(const MechanicalMode& mode, double sample_rate) const;
};

struct OscillatorState {
    double position = 0.0;  // m
    double velocity = 0.0;  // m/s
};

/// Thermally driven damped oscillator, propagated with its exact discrete-time solution.
///
/// Each step applies the closed-form transition matrix of the underdamped oscillator
/// plus a Gaussian kick with the exact per-step covariance, so the recursion is
/// stable at any Q and reproduces the stationary variance k_B T / (m Omega_m^2).
class MembraneSynthesizer {
public:
    /// Starts from a draw of the stationary distribution unless `initial` is given.
    MembraneSynthesizer(const MechanicalMode& mode, double sample_rate, std::uint64_t seed,
                        std::optional<OscillatorState> initial = std::nullopt);

    void generate(std::span<double> out);
    const OscillatorState& state() const { return state_; }
    double sample_rate() const { return rate_; }

private:
    void step();

    double rate_;
    double phi_[2][2];
    double noise_chol_[3];  // lower triangle l00, l10, l11
    OscillatorState state_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

struct SynthesisOptions {
    std::optional<OscillatorState> initial;
};

/// Membrane displacement record in metres. Throws PreconditionError if rate <= 10 f_res.
TimeSeries synthesize_membrane_motion(const MechanicalMode& mode, double duration,
                                      double sample_rate, std::uint64_t seed,
                                      const SynthesisOptions& options = {});

/// Warning text when a run from a non-stationary start is shorter than Q / f_res.
std::optional<std::string> stationarity_warning(const MechanicalMode& mode, double duration);

/// Adds a * sin(2 pi f t) to a displacement record.
void add_marker(TimeSeries& displacement, const CalibrationMarker& marker);

/// Converts metres at the membrane to shot-noise units per sample (vacuum variance 1/2).
///
/// kappa = G sqrt(2 eta / f_s); a displacement PSD S_x maps onto kappa^2 S_x while the
/// shot noise sits at 1 / f_s, so S_x = S_imp gives unit signal-to-shot ratio.
double detector_scale(const InterferometerConfig& config, const EfficiencyBudget& efficiency,
                      double sample_rate);

/// Homodyne output in shot-noise units: cos(theta) kappa x(t) + white shot noise of variance 1/2.
TimeSeries synthesize_detector_output(const TimeSeries& displacement,
                                      const InterferometerConfig& config,
                                      const EfficiencyBudget& efficiency,
                                      const HomodyneConfig& homodyne, std::uint64_t seed);

}  // namespace optotomo
