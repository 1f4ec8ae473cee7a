#include "optotomo/interferometer.hpp"

#include <cmath>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"

namespace optotomo {

void InterferometerConfig::validate() const {
    if (!std::isfinite(wavelength) || wavelength <= 0.0) {
        throw DomainError("wavelength must be positive");
    }
    if (!std::isfinite(input_power) || input_power <= 0.0) {
        throw DomainError("input_power must be positive");
    }
    if (!std::isfinite(lo_power) || lo_power <= 0.0) {
        throw DomainError("lo_power must be positive");
    }
    if (!(membrane_amplitude_reflectivity > 0.0 && membrane_amplitude_reflectivity < 1.0)) {
        throw DomainError("membrane_amplitude_reflectivity must lie in (0, 1)");
    }
    if (!(dark_port_contrast_defect >= 0.0 && dark_port_contrast_defect < 1.0)) {
        throw DomainError("dark_port_contrast_defect must lie in [0, 1)");
    }
}

double InterferometerConfig::wavenumber() const { return kTwoPi / wavelength; }

double InterferometerConfig::optical_angular_frequency() const {
    return kTwoPi * PhysicalConstants::c_light / wavelength;
}

double InterferometerConfig::carrier_leakage_power() const {
    return dark_port_contrast_defect * input_power;
}

EfficiencyBudget::EfficiencyBudget(double detector_quantum_efficiency,
                                   double optical_path_efficiency)
    : qe_(detector_quantum_efficiency), optics_(optical_path_efficiency) {
    if (!(qe_ > 0.0 && qe_ <= 1.0)) {
        throw DomainError("detector quantum efficiency must lie in (0, 1]");
    }
    if (!(optics_ > 0.0 && optics_ <= 1.0)) {
        throw DomainError("optical path efficiency must lie in (0, 1]");
    }
}

EfficiencyBudget overall_efficiency(double quantum_efficiency, double optical_efficiency) {
    return EfficiencyBudget(quantum_efficiency, optical_efficiency);
}

double displacement_to_output_gain(const InterferometerConfig& config) {
    const double photon_flux = config.input_power /
                               (PhysicalConstants::hbar * config.optical_angular_frequency());
    return 2.0 * config.wavenumber() * config.membrane_amplitude_reflectivity *
           std::sqrt(photon_flux);
}

double shot_imprecision_psd(double frequency, const InterferometerConfig& config,
                            const EfficiencyBudget& efficiency) {
    if (!(frequency >= 0.0)) throw DomainError("frequency must be non-negative");
    const double transduction = 2.0 * config.wavenumber() * config.membrane_amplitude_reflectivity;
    const double photon_energy = PhysicalConstants::hbar * config.optical_angular_frequency();
    return photon_energy / (2.0 * efficiency.total() * config.input_power) /
           (transduction * transduction);
}

double total_readout_psd(double frequency, const MechanicalMode& mode,
                         const InterferometerConfig& config, const EfficiencyBudget& efficiency,
                         double dark_noise_psd) {
    if (!(dark_noise_psd >= 0.0)) throw DomainError("dark_noise_psd must be non-negative");
    return thermal_psd(frequency, mode) + shot_imprecision_psd(frequency, config, efficiency) +
           dark_noise_psd;
}

}  // namespace optotomo
