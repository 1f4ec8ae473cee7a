#pragma once

// Test-only reference computations, kept independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kKb = 1.380649e-23;
inline constexpr double kC = 299792458.0;

/// Airy form of the lossless slab: R = 4 r^2 sin^2(phi) / ((1 - r^2)^2 + 4 r^2 sin^2(phi)).
inline double airy_reflectivity(double n, double t, double lambda) {
    const double r = (n - 1.0) / (n + 1.0);
    const double s = std::sin(2.0 * kPi * n * t / lambda);
    const double num = 4.0 * r * r * s * s;
    return num / ((1.0 - r * r) * (1.0 - r * r) + num);
}

/// Closed-form inversion of the Airy form on the first rising branch.
inline double airy_thickness(double R, double n, double lambda) {
    const double r = (n - 1.0) / (n + 1.0);
    const double s2 = R * (1.0 - r * r) * (1.0 - r * r) / (4.0 * r * r * (1.0 - R));
    return std::asin(std::sqrt(s2)) * lambda / (2.0 * kPi * n);
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

/// Integral of a sharply peaked function over [a, b] using u = atan((x - centre) / width),
/// which spreads a Lorentzian of that width evenly over the u interval.
inline double lorentz_mapped_integral(const std::function<double(double)>& f, double a, double b,
                                      double centre, double width, int panels) {
    const double ua = std::atan((a - centre) / width);
    const double ub = std::atan((b - centre) / width);
    auto g = [&](double u) {
        const double t = std::tan(u);
        return f(centre + width * t) * width * (1.0 + t * t);
    };
    return simpson(g, ua, ub, panels);
}

/// Velocity-damped thermal PSD written out from the fluctuation-dissipation theorem.
inline double thermal_psd(double f, double f_res, double q, double m, double temperature) {
    const double w = 2.0 * kPi * f;
    const double wm = 2.0 * kPi * f_res;
    const double g = wm / q;
    const double d = wm * wm - w * w;
    return 4.0 * kKb * temperature * g / (m * (d * d + w * w * g * g));
}

/// Standard error of an unbiased sample variance of n Gaussian draws with true variance v.
inline double variance_standard_error(double v, double n) { return v * std::sqrt(2.0 / (n - 1.0)); }

/// Rotational asymmetry of a sampled 2-D map: area-weighted average of `w(x, y)` over
/// each of `sectors` wedges of the disc r < radius, returned as (max - min) of those
/// wedge averages. `w` should interpolate between grid samples.
inline double wedge_asymmetry(const std::function<double(double, double)>& w, double radius,
                              int sectors, int radial = 200, int per_wedge = 40) {
    double lo = 1e300, hi = -1e300;
    for (int s = 0; s < sectors; ++s) {
        double sum = 0.0, area = 0.0;
        for (int a = 0; a < per_wedge; ++a) {
            const double phi = 2.0 * kPi * (s + (a + 0.5) / per_wedge) / sectors;
            for (int i = 0; i < radial; ++i) {
                const double r = radius * (i + 0.5) / radial;
                sum += w(r * std::cos(phi), r * std::sin(phi)) * r;
                area += r;
            }
        }
        lo = std::min(lo, sum / area);
        hi = std::max(hi, sum / area);
    }
    return hi - lo;
}

}  // namespace oracle
