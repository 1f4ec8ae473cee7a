#include "optotomo/homodyne.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "optotomo/errors.hpp"

namespace optotomo {

void HomodyneConfig::validate() const {
    if (!std::isfinite(angle) || !std::isfinite(lock_target)) {
        throw DomainError("homodyne angles must be finite");
    }
    if (!(lo_amplitude > 0.0) || !std::isfinite(lo_amplitude)) {
        throw DomainError("lo_amplitude must be positive");
    }
    if (!(signal_power >= 0.0)) throw DomainError("signal_power must be non-negative");
    if (lo_power() < 20.0 * signal_power) {
        throw ValidityError("LO power " + std::to_string(lo_power()) +
                            " W is below 20x the signal power " + std::to_string(signal_power) +
                            " W; the strong-LO homodyne approximation does not hold");
    }
}

GaussianState::GaussianState(Eigen::Vector2d mean, Eigen::Matrix2d covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
    const double v11 = covariance_(0, 0);
    const double v22 = covariance_(1, 1);
    const double v12 = covariance_(0, 1);
    if (!mean_.allFinite() || !covariance_.allFinite()) {
        throw DomainError("Gaussian state entries must be finite");
    }
    if (std::abs(covariance_(0, 1) - covariance_(1, 0)) > 1e-12 * (std::abs(v11) + std::abs(v22))) {
        throw PhysicalityError("covariance is not symmetric", v11, v22, v12);
    }
    if (!(v11 > 0.0) || !(covariance_.determinant() > 0.0)) {
        throw PhysicalityError("covariance is not positive-definite", v11, v22, v12);
    }
    // Small relative slack so that exact vacuum (det == 1/4) passes after rounding.
    if (covariance_.determinant() < 0.25 * (1.0 - 1e-12)) {
        throw PhysicalityError("covariance violates the uncertainty relation det >= 1/4", v11,
                               v22, v12);
    }
}

GaussianState GaussianState::vacuum() { return thermal(0.5); }

GaussianState GaussianState::thermal(double variance) {
    return GaussianState(Eigen::Vector2d::Zero(), variance * Eigen::Matrix2d::Identity());
}

QuadratureSamples quadrature_readout(const QuadratureSamples& x1, const QuadratureSamples& x2,
                                     const HomodyneConfig& config) {
    config.validate();
    if (x1.values.size() != x2.values.size()) {
        throw PreconditionError("quadrature records differ in length");
    }
    if (x1.sample_rate != x2.sample_rate) {
        throw PreconditionError("quadrature records differ in sample rate");
    }
    const double c = std::cos(config.angle);
    const double s = std::sin(config.angle);
    QuadratureSamples out;
    out.angle = config.angle;
    out.sample_rate = x1.sample_rate;
    out.seed = x1.seed;
    out.values.resize(x1.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double value = c * x1.values[i] + s * x2.values[i];
        if (!std::isfinite(value)) throw DomainError("non-finite quadrature sample");
        out.values[i] = value;
    }
    return out;
}

double theta_scan_power(double theta, double shot_power, double membrane_power) {
    if (!(shot_power >= 0.0) || !(membrane_power >= 0.0)) {
        throw DomainError("noise powers must be non-negative");
    }
    const double c = std::cos(theta);
    return shot_power + membrane_power * c * c;
}

double pm_lock_error_signal(double theta, const HomodyneConfig& config) {
    return config.lo_amplitude * std::sin(theta - config.lock_target);
}

double pm_lock_error_slope(double theta, const HomodyneConfig& config) {
    return config.lo_amplitude * std::cos(theta - config.lock_target);
}

double variance_vs_theta(const Eigen::Matrix2d& covariance, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return covariance(0, 0) * c * c + covariance(1, 1) * s * s + 2.0 * covariance(0, 1) * s * c;
}

double variance_vs_theta(const GaussianState& state, double theta) {
    return variance_vs_theta(state.covariance(), theta);
}

std::pair<QuadratureSamples, QuadratureSamples> sample_state(const GaussianState& state,
                                                             std::size_t count,
                                                             double sample_rate,
                                                             std::uint64_t seed) {
    const Eigen::Matrix2d chol = state.covariance().llt().matrixL();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    QuadratureSamples x1{0.0, std::vector<double>(count), sample_rate, seed};
    QuadratureSamples x2{0.0, std::vector<double>(count), sample_rate, seed};
    x2.angle = 1.5707963267948966;
    for (std::size_t i = 0; i < count; ++i) {
        const Eigen::Vector2d z(normal(rng), normal(rng));
        const Eigen::Vector2d x = state.mean() + chol * z;
        x1.values[i] = x(0);
        x2.values[i] = x(1);
    }
    return {std::move(x1), std::move(x2)};
}

QuadratureSamples sample_quadrature(const GaussianState& state, double theta, std::size_t count,
                                    std::uint64_t seed) {
    auto [x1, x2] = sample_state(state, count, 1.0, seed);
    HomodyneConfig config;
    config.angle = theta;
    return quadrature_readout(x1, x2, config);
}

}  // namespace optotomo
