#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace optotomo {

struct HomodyneConfig {
    double angle = 0.0;            // rad, readout quadrature theta
    double lo_amplitude = 0.10954451150103323;  // sqrt(W), sqrt(12 mW)
    double pm_frequency = 10e6;    // Hz
    double lock_target = 0.0;      // rad
    double signal_power = 0.2e-3;  // W reaching the homodyne beam splitter

    double lo_power() const { return lo_amplitude * lo_amplitude; }
    /// Throws ValidityError unless the LO carries at least 20x the signal power.
    void validate() const;
};

/// Quadrature record in shot-noise units (vacuum variance 1/2).
struct QuadratureSamples {
    double angle = 0.0;
    std::vector<double> values;
    double sample_rate = 1.0;
    std::uint64_t seed = 0;
};

/// Gaussian state of one optical mode: quadrature means and covariance in shot-noise units.
class GaussianState {
public:
    /// Throws PhysicalityError unless the covariance is symmetric positive-definite
    /// with det >= 1/4.
    GaussianState(Eigen::Vector2d mean, Eigen::Matrix2d covariance);

    static GaussianState vacuum();
    static GaussianState thermal(double variance);

    const Eigen::Vector2d& mean() const { return mean_; }
    const Eigen::Matrix2d& covariance() const { return covariance_; }

private:
    Eigen::Vector2d mean_;
    Eigen::Matrix2d covariance_;
};

/// Difference photocurrent normalised by alpha_LO: cos(theta) X1 + sin(theta) X2.
QuadratureSamples quadrature_readout(const QuadratureSamples& x1, const QuadratureSamples& x2,
                                     const HomodyneConfig& config);

/// Zero-span noise power versus readout angle; the membrane signal sits in X1.
double theta_scan_power(double theta, double shot_power, double membrane_power);

/// Idealised demodulated lock error K sin(theta - theta_set), K = lo_amplitude.
double pm_lock_error_signal(double theta, const HomodyneConfig& config);

/// Slope d(error)/d(theta).
double pm_lock_error_slope(double theta, const HomodyneConfig& config);

double variance_vs_theta(const GaussianState& state, double theta);
double variance_vs_theta(const Eigen::Matrix2d& covariance, double theta);

/// Draws joint (X1, X2) samples of `state`.
std::pair<QuadratureSamples, QuadratureSamples> sample_state(const GaussianState& state,
                                                             std::size_t count,
                                                             double sample_rate,
                                                             std::uint64_t seed);

/// Samples of X_theta for `state`, generated through quadrature_readout.
QuadratureSamples sample_quadrature(const GaussianState& state, double theta, std::size_t count,
                                    std::uint64_t seed);

}  // namespace optotomo
