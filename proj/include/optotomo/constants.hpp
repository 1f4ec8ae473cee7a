#pragma once

namespace optotomo {

// CODATA 2018 exact / recommended values.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;    // J s
    static constexpr double k_boltzmann = 1.380649e-23; // J/K
    static constexpr double c_light = 299792458.0;      // m/s
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace optotomo
