#pragma once

#include <complex>

namespace optotomo {

/// Thin dielectric membrane treated as a slab etalon at normal incidence.
struct MembraneOptics {
    double refractive_index = 2.2;
    double thickness = 40e-9;      // m
    double side_length = 1.5e-3;   // m
    double density = 3100.0;       // kg/m^3, SiN; not a measured value
    double power_reflectivity = 0.17;
    /// Allowed |R - R_slab(n, t, lambda)| when validating against a wavelength.
    double reflectivity_tolerance = 0.02;

    /// Checks the scalar invariants; throws DomainError.
    void validate() const;
    /// Additionally checks that `power_reflectivity` agrees with the slab model at `wavelength`.
    void validate(double wavelength) const;
};

/// Fundamental drum mode of the membrane.
struct MechanicalMode {
    double resonance_frequency = 133.88e3;  // Hz
    double quality_factor = 6e5;            // may be +inf (undamped)
    double effective_mass = 80e-12;         // kg
    double temperature = 300.0;             // K

    void validate() const;
    double angular_frequency() const;
    /// Velocity damping rate gamma = Omega_m / Q, in rad/s.
    double damping_rate() const;
};

enum class DampingModel { velocity, structural };

double membrane_reflectivity(double refractive_index, double thickness, double wavelength);

/// Largest power reflectivity a lossless slab of index n reaches (quarter-wave thickness).
double max_slab_reflectivity(double refractive_index);

/// Thinnest slab with the given power reflectivity. Throws UnsatisfiableError above the slab maximum.
double infer_thickness(double power_reflectivity, double refractive_index, double wavelength);

double effective_mass(const MembraneOptics& membrane);

/// Displacement response per unit force, m/N.
std::complex<double> mech_susceptibility(double frequency, const MechanicalMode& mode);

/// One-sided thermal displacement PSD (m^2/Hz) from the fluctuation-dissipation theorem.
///
/// Velocity damping is the default. Structural (loss-angle phi = 1/Q) damping
/// diverges as 1/f towards DC and returns +inf at f = 0.
double thermal_psd(double frequency, const MechanicalMode& mode,
                   DampingModel damping = DampingModel::velocity);

/// Standard quantum limit 2 hbar |chi|, m^2/Hz.
double sql_psd(double frequency, const MechanicalMode& mode);

/// sqrt(2 hbar Q / (m Omega_m^2)), the SQL amplitude spectral density at resonance.
double sql_peak_asd(const MechanicalMode& mode);

/// k_B T / (m Omega_m^2), the equipartition displacement variance.
double thermal_variance(const MechanicalMode& mode);

}  // namespace optotomo
