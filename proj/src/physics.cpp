#include "optotomo/physics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"

namespace optotomo {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

// Slab reflectivity as a function of the single-pass phase phi = n k t.
double slab_reflectivity_at_phase(double refractive_index, double phase) {
    const double r1 = (1.0 - refractive_index) / (1.0 + refractive_index);
    const std::complex<double> round_trip = std::polar(1.0, 2.0 * phase);
    const std::complex<double> r = r1 * (1.0 - round_trip) / (1.0 - r1 * r1 * round_trip);
    return std::norm(r);
}

}  // namespace

void MembraneOptics::validate() const {
    require_finite(refractive_index, "refractive_index");
    require_finite(thickness, "thickness");
    require_finite(side_length, "side_length");
    require_finite(density, "density");
    require_finite(power_reflectivity, "power_reflectivity");
    if (refractive_index <= 1.0) throw DomainError("refractive_index must exceed 1");
    if (thickness <= 0.0) throw DomainError("thickness must be positive");
    if (side_length <= 0.0) throw DomainError("side_length must be positive");
    if (density <= 0.0) throw DomainError("density must be positive");
    if (power_reflectivity < 0.0 || power_reflectivity >= 1.0) {
        throw DomainError("power_reflectivity must lie in [0, 1)");
    }
}

void MembraneOptics::validate(double wavelength) const {
    validate();
    const double modeled = membrane_reflectivity(refractive_index, thickness, wavelength);
    if (std::abs(modeled - power_reflectivity) > reflectivity_tolerance) {
        throw DomainError("power_reflectivity " + std::to_string(power_reflectivity) +
                          " inconsistent with slab model value " + std::to_string(modeled));
    }
}

void MechanicalMode::validate() const {
    require_finite(resonance_frequency, "resonance_frequency");
    require_finite(effective_mass, "effective_mass");
    require_finite(temperature, "temperature");
    if (std::isnan(quality_factor)) throw DomainError("quality_factor is NaN");
    if (resonance_frequency <= 0.0) throw DomainError("resonance_frequency must be positive");
    if (!(quality_factor > 1.0)) throw DomainError("quality_factor must exceed 1");
    if (effective_mass <= 0.0) throw DomainError("effective_mass must be positive");
    if (temperature < 0.0) throw DomainError("temperature must be non-negative");
}

double MechanicalMode::angular_frequency() const { return kTwoPi * resonance_frequency; }

double MechanicalMode::damping_rate() const { return angular_frequency() / quality_factor; }

double membrane_reflectivity(double refractive_index, double thickness, double wavelength) {
    require_finite(refractive_index, "refractive_index");
    require_finite(thickness, "thickness");
    require_finite(wavelength, "wavelength");
    if (refractive_index <= 1.0) throw DomainError("refractive_index must exceed 1");
    if (thickness < 0.0) throw DomainError("thickness must be non-negative");
    if (wavelength <= 0.0) throw DomainError("wavelength must be positive");
    const double phase = refractive_index * (kTwoPi / wavelength) * thickness;
    return slab_reflectivity_at_phase(refractive_index, phase);
}

double max_slab_reflectivity(double refractive_index) {
    require_finite(refractive_index, "refractive_index");
    if (refractive_index <= 1.0) throw DomainError("refractive_index must exceed 1");
    return slab_reflectivity_at_phase(refractive_index, kPi / 2.0);
}

double infer_thickness(double power_reflectivity, double refractive_index, double wavelength) {
    require_finite(power_reflectivity, "power_reflectivity");
    require_finite(wavelength, "wavelength");
    if (wavelength <= 0.0) throw DomainError("wavelength must be positive");
    if (power_reflectivity < 0.0) throw DomainError("power_reflectivity must be non-negative");
    const double r_max = max_slab_reflectivity(refractive_index);
    if (power_reflectivity > r_max) {
        throw UnsatisfiableError("power reflectivity " + std::to_string(power_reflectivity) +
                                 " exceeds slab maximum " + std::to_string(r_max) +
                                 " for n = " + std::to_string(refractive_index));
    }
    if (power_reflectivity == 0.0) return 0.0;

    // R(phi) increases monotonically on (0, pi/2].
    double lo = 0.0;
    double hi = kPi / 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (slab_reflectivity_at_phase(refractive_index, mid) < power_reflectivity) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double phase = 0.5 * (lo + hi);
    return phase * wavelength / (kTwoPi * refractive_index);
}

double effective_mass(const MembraneOptics& membrane) {
    // Fundamental mode sin(pi x/L) sin(pi y/L): mean squared mode shape is 1/4.
    return 0.25 * membrane.density * membrane.side_length * membrane.side_length *
           membrane.thickness;
}

std::complex<double> mech_susceptibility(double frequency, const MechanicalMode& mode) {
    if (!(frequency >= 0.0)) throw DomainError("frequency must be non-negative");
    const double w = kTwoPi * frequency;
    const double wm = mode.angular_frequency();
    const double damping = std::isinf(mode.quality_factor) ? 0.0 : w * wm / mode.quality_factor;
    return 1.0 / (mode.effective_mass * std::complex<double>(wm * wm - w * w, damping));
}

double thermal_psd(double frequency, const MechanicalMode& mode, DampingModel damping) {
    if (!(frequency >= 0.0)) throw DomainError("frequency must be non-negative");
    if (mode.temperature == 0.0 || std::isinf(mode.quality_factor)) return 0.0;
    const double kt = PhysicalConstants::k_boltzmann * mode.temperature;
    const double w = kTwoPi * frequency;
    const double wm = mode.angular_frequency();
    const double detuning = wm * wm - w * w;
    if (damping == DampingModel::velocity) {
        const double gamma = wm / mode.quality_factor;
        return 4.0 * kt * gamma /
               (mode.effective_mass * (detuning * detuning + (w * gamma) * (w * gamma)));
    }
    if (frequency == 0.0) return std::numeric_limits<double>::infinity();
    const double phi = 1.0 / mode.quality_factor;
    const double wm2phi = wm * wm * phi;
    return 4.0 * kt * wm * wm * phi /
           (mode.effective_mass * w * (detuning * detuning + wm2phi * wm2phi));
}

double sql_psd(double frequency, const MechanicalMode& mode) {
    return 2.0 * PhysicalConstants::hbar * std::abs(mech_susceptibility(frequency, mode));
}

double sql_peak_asd(const MechanicalMode& mode) {
    const double wm = mode.angular_frequency();
    return std::sqrt(2.0 * PhysicalConstants::hbar * mode.quality_factor /
                     (mode.effective_mass * wm * wm));
}

double thermal_variance(const MechanicalMode& mode) {
    const double wm = mode.angular_frequency();
    return PhysicalConstants::k_boltzmann * mode.temperature / (mode.effective_mass * wm * wm);
}

}  // namespace optotomo
