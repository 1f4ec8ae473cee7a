#pragma once

#include "optotomo/physics.hpp"

namespace optotomo {

/// Michelson-Sagnac interferometer held on its dark port.
struct InterferometerConfig {
    double wavelength = 1064e-9;                   // m
    double input_power = 0.2;                      // W
    double lo_power = 12e-3;                       // W
    double membrane_amplitude_reflectivity = 0.41231056256176607;  // sqrt(0.17)
    /// Fraction of the input power leaking out of the dark port as carrier.
    double dark_port_contrast_defect = 1e-3;

    void validate() const;
    double wavenumber() const;                // 2 pi / lambda
    double optical_angular_frequency() const; // 2 pi c / lambda
    double carrier_leakage_power() const;
};

/// Detection efficiency split into photodiode quantum efficiency and optical path loss.
class EfficiencyBudget {
public:
    EfficiencyBudget(double detector_quantum_efficiency, double optical_path_efficiency);

    double detector_quantum_efficiency() const { return qe_; }
    double optical_path_efficiency() const { return optics_; }
    double total() const { return qe_ * optics_; }

private:
    double qe_;
    double optics_;
};

EfficiencyBudget overall_efficiency(double quantum_efficiency, double optical_efficiency);

/// Dark-port amplitude-quadrature sideband per unit membrane displacement.
///
/// G = 2 k r_m sqrt(P_in / (hbar omega_L)) in units of sqrt(photons/s) per metre.
/// With efficiency eta the shot-noise-limited displacement PSD is 1 / (2 eta G^2).
double displacement_to_output_gain(const InterferometerConfig& config);

/// Frequency-flat shot-noise imprecision, hbar omega_L / (2 eta P_in) / (2 k r_m)^2 in m^2/Hz.
double shot_imprecision_psd(double frequency, const InterferometerConfig& config,
                            const EfficiencyBudget& efficiency);

/// Thermal + shot imprecision + electronic dark noise, added in power.
double total_readout_psd(double frequency, const MechanicalMode& mode,
                         const InterferometerConfig& config, const EfficiencyBudget& efficiency,
                         double dark_noise_psd);

}  // namespace optotomo
