#include "approx.hpp"

#include <cmath>
#include <random>

#include "optotomo/errors.hpp"
#include "optotomo/physics.hpp"
#include "oracles.hpp"

using namespace optotomo;

namespace {
constexpr double kLambda = 1064e-9;
constexpr double kN = 2.2;

MechanicalMode published_mode() { return MechanicalMode{}; }
}  // namespace

TEST_CASE("membrane_reflectivity matches the 17% membrane with the slab model") {
    const double r = membrane_reflectivity(kN, 40e-9, kLambda);
    CHECK(r == approx(0.158).epsilon(0.01));
    CHECK(std::abs(r - 0.17) <= 0.02);
    CHECK(r == approx(oracle::airy_reflectivity(kN, 40e-9, kLambda)).epsilon(1e-13));
}

TEST_CASE("membrane_reflectivity limits") {
    CHECK(membrane_reflectivity(kN, 0.0, kLambda) == 0.0);
    // Half-wave slab: round-trip phase 2 pi, reflections cancel.
    CHECK(membrane_reflectivity(kN, kLambda / (2.0 * kN), kLambda) < 1e-28);
    CHECK(kLambda / (2.0 * kN) == approx(241.8e-9).epsilon(1e-3));
}

TEST_CASE("membrane_reflectivity periodicity and mirror symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> thickness(1e-9, kLambda / (2.0 * kN));
    const double period = kLambda / (2.0 * kN);
    for (int i = 0; i < 200; ++i) {
        const double t = thickness(rng);
        const double r = membrane_reflectivity(kN, t, kLambda);
        CHECK(r >= 0.0);
        CHECK(r < 1.0);
        CHECK(membrane_reflectivity(kN, t + period, kLambda) == approx(r).epsilon(1e-9));
        CHECK(membrane_reflectivity(kN, kLambda / kN - t, kLambda) == approx(r).epsilon(1e-9));
    }
}

TEST_CASE("membrane_reflectivity rejects bad input") {
    CHECK_THROWS_AS(membrane_reflectivity(1.0, 40e-9, kLambda), DomainError);
    CHECK_THROWS_AS(membrane_reflectivity(kN, -1e-9, kLambda), DomainError);
    CHECK_THROWS_AS(membrane_reflectivity(kN, 40e-9, 0.0), DomainError);
    CHECK_THROWS_AS(membrane_reflectivity(kN, NAN, kLambda), DomainError);
}

TEST_CASE("infer_thickness recovers the deduced membrane thickness") {
    const double t = infer_thickness(0.17, kN, kLambda);
    CHECK(t == approx(40e-9).epsilon(0.10));
    CHECK(t == approx(42e-9).epsilon(0.01));
    CHECK(t == approx(oracle::airy_thickness(0.17, kN, kLambda)).epsilon(1e-12));
}

TEST_CASE("infer_thickness round-trips through membrane_reflectivity") {
    const double r30 = membrane_reflectivity(kN, 30e-9, kLambda);
    CHECK(infer_thickness(r30, kN, kLambda) == approx(30e-9).epsilon(1e-12));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> thickness(1e-10, kLambda / (4.0 * kN) * 0.999);
    for (int i = 0; i < 500; ++i) {
        const double t = thickness(rng);
        const double back = infer_thickness(membrane_reflectivity(kN, t, kLambda), kN, kLambda);
        CHECK(std::abs(back - t) <= 1e-12 * t);
    }
}

TEST_CASE("infer_thickness edge cases") {
    CHECK(infer_thickness(0.0, kN, kLambda) == 0.0);
    CHECK(infer_thickness(1e-14, kN, kLambda) < 1e-12);
    const double r_max = max_slab_reflectivity(kN);
    const double r1 = (kN - 1.0) / (kN + 1.0);
    CHECK(r_max == approx(4.0 * r1 * r1 / std::pow(1.0 + r1 * r1, 2)).epsilon(1e-13));
    CHECK(infer_thickness(r_max, kN, kLambda) == approx(kLambda / (4.0 * kN)).epsilon(1e-6));
    CHECK_THROWS_AS(infer_thickness(r_max * 1.001, kN, kLambda), UnsatisfiableError);
    CHECK_THROWS_AS(infer_thickness(0.5, kN, kLambda), UnsatisfiableError);
}

TEST_CASE("effective_mass of the fundamental drum mode") {
    MembraneOptics m;
    CHECK(effective_mass(m) == approx(69.75e-12).epsilon(1e-9));
    CHECK(std::abs(effective_mass(m) - 80e-12) <= 0.25 * 80e-12);
    m.thickness = 0.0;
    CHECK(effective_mass(m) == 0.0);
}

TEST_CASE("mode-shape factor by 2-D quadrature is 1/4") {
    // Midpoint rule on a 200 x 200 grid of the unit square.
    const int n = 200;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sx = std::sin(oracle::kPi * (i + 0.5) / n);
        for (int j = 0; j < n; ++j) {
            const double sy = std::sin(oracle::kPi * (j + 0.5) / n);
            sum += sx * sx * sy * sy;
        }
    }
    const double factor = sum / (n * n);
    CHECK(std::abs(factor - 0.25) < 1e-6);
    MembraneOptics m;
    CHECK(effective_mass(m) == approx(factor * m.density * m.side_length * m.side_length * m.thickness).epsilon(1e-6));
}

TEST_CASE("mech_susceptibility") {
    const auto mode = published_mode();
    const double wm = 2.0 * oracle::kPi * mode.resonance_frequency;
    const auto dc = mech_susceptibility(0.0, mode);
    CHECK(dc.real() == approx(1.0 / (80e-12 * wm * wm)).epsilon(1e-12));
    CHECK(dc.real() == approx(1.77e-2).epsilon(0.01));
    CHECK(dc.imag() == 0.0);
    const double peak = std::abs(mech_susceptibility(mode.resonance_frequency, mode));
    CHECK(peak == approx(6e5 / (80e-12 * wm * wm)).epsilon(1e-9));
    CHECK(peak == approx(1.06e4).epsilon(0.01));

    auto undamped = mode;
    undamped.quality_factor = INFINITY;
    CHECK(mech_susceptibility(120e3, undamped).imag() == 0.0);
    CHECK_THROWS_AS(mech_susceptibility(-1.0, mode), DomainError);
}

TEST_CASE("thermal_psd peak and closed form") {
    const auto mode = published_mode();
    const double wm = 2.0 * oracle::kPi * mode.resonance_frequency;
    const double peak = thermal_psd(mode.resonance_frequency, mode);
    CHECK(peak == approx(4.0 * oracle::kKb * 300.0 * 6e5 / (80e-12 * wm * wm * wm)).epsilon(1e-12));
    CHECK(peak == approx(2.09e-22).epsilon(0.005));
    CHECK(std::sqrt(peak) == approx(1.44e-11).epsilon(0.005));
    for (double f : {1e3, 50e3, 120e3, 133.8e3, 200e3, 5e6}) {
        CHECK(thermal_psd(f, mode) == approx(oracle::thermal_psd(f, 133.88e3, 6e5, 80e-12, 300.0)).epsilon(1e-12));
    }
}

TEST_CASE("thermal_psd integrates to the equipartition variance") {
    for (double q : {100.0, 6e5}) {
        auto mode = published_mode();
        mode.quality_factor = q;
        const double expected = oracle::kKb * 300.0 / (80e-12 * std::pow(2.0 * oracle::kPi * 133.88e3, 2));
        CHECK(expected == approx(7.32e-23).epsilon(0.002));
        const double width = mode.resonance_frequency / (2.0 * q);
        const double integral = oracle::lorentz_mapped_integral(
            [&](double f) { return f < 0.0 ? 0.0 : thermal_psd(f, mode); }, 0.0,
            100.0 * mode.resonance_frequency, mode.resonance_frequency, width, 200000);
        CHECK(integral == approx(expected).epsilon(0.005));
        CHECK(thermal_variance(mode) == approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("thermal_psd is non-negative and vanishes at zero temperature") {
    auto mode = published_mode();
    for (double f = 0.0; f < 1e6; f += 997.0) CHECK(thermal_psd(f, mode) >= 0.0);
    mode.temperature = 0.0;
    for (double f : {0.0, 133.88e3, 1e6}) CHECK(thermal_psd(f, mode) == 0.0);
}

TEST_CASE("structural damping toggle") {
    const auto mode = published_mode();
    CHECK(thermal_psd(mode.resonance_frequency, mode, DampingModel::structural) ==
          approx(thermal_psd(mode.resonance_frequency, mode)).epsilon(1e-9));
    CHECK(std::isinf(thermal_psd(0.0, mode, DampingModel::structural)));
    // Below resonance structural damping carries more noise than viscous damping.
    CHECK(thermal_psd(10e3, mode, DampingModel::structural) > thermal_psd(10e3, mode));
}

TEST_CASE("sql_psd peak and consistency with the susceptibility") {
    const auto mode = published_mode();
    const double peak_asd = sql_peak_asd(mode);
    CHECK(peak_asd == approx(1.50e-15).epsilon(0.005));
    CHECK(std::sqrt(sql_psd(mode.resonance_frequency, mode)) == approx(peak_asd).epsilon(1e-9));
    CHECK(peak_asd / 1.9e-16 == approx(8.2).epsilon(0.10));

    for (int i = 0; i < 1000; ++i) {
        const double f = 1e3 + 1e3 * i;
        const double s = sql_psd(f, mode);
        const double chi = std::abs(mech_susceptibility(f, mode));
        CHECK(s * s / (4.0 * oracle::kHbar * oracle::kHbar) == approx(chi * chi).epsilon(1e-12));
    }
    const double f_high = 1e9;
    const double w = 2.0 * oracle::kPi * f_high;
    CHECK(sql_psd(f_high, mode) == approx(2.0 * oracle::kHbar / (80e-12 * w * w)).epsilon(1e-4));
}

TEST_CASE("sql_psd maximum sits at f_res sqrt(1 - 1/(2 Q^2))") {
    auto mode = published_mode();
    mode.quality_factor = 10.0;
    const double expected = mode.resonance_frequency * std::sqrt(1.0 - 1.0 / (2.0 * 100.0));
    double best_f = 0.0, best = 0.0;
    for (double f = 120e3; f < 140e3; f += 0.5) {
        if (sql_psd(f, mode) > best) {
            best = sql_psd(f, mode);
            best_f = f;
        }
    }
    CHECK(std::abs(best_f - expected) <= 0.5);
}

TEST_CASE("physics operations are pure") {
    const auto mode = published_mode();
    for (double f : {0.0, 1.234e5, 9.9e6}) {
        CHECK(thermal_psd(f, mode) == thermal_psd(f, mode));
        CHECK(sql_psd(f, mode) == sql_psd(f, mode));
    }
    CHECK(infer_thickness(0.17, kN, kLambda) == infer_thickness(0.17, kN, kLambda));
}

TEST_CASE("type invariants") {
    MembraneOptics m;
    CHECK_NOTHROW(m.validate(kLambda));
    m.power_reflectivity = 0.30;
    CHECK_THROWS_AS(m.validate(kLambda), DomainError);
    m = MembraneOptics{};
    m.refractive_index = 0.9;
    CHECK_THROWS_AS(m.validate(), DomainError);

    MechanicalMode mode;
    CHECK_NOTHROW(mode.validate());
    mode.quality_factor = 1.0;
    CHECK_THROWS_AS(mode.validate(), DomainError);
    mode = MechanicalMode{};
    mode.effective_mass = 0.0;
    CHECK_THROWS_AS(mode.validate(), DomainError);
    mode = MechanicalMode{};
    mode.resonance_frequency = -1.0;
    CHECK_THROWS_AS(mode.validate(), DomainError);
}
