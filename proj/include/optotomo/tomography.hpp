#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "optotomo/homodyne.hpp"

namespace optotomo {

struct AngleVariance {
    double theta;
    double variance;
};

struct CovarianceFit {
    Eigen::Matrix2d covariance;
    double residual_rms = 0.0;
    std::size_t distinct_angles = 0;

    double determinant() const { return covariance.determinant(); }
    /// det >= 1/4 - tolerance.
    bool satisfies_uncertainty(double tolerance = 0.0) const;
};

/// Least-squares fit of V11 cos^2 + V22 sin^2 + 2 V12 sin cos to a variance scan.
///
/// Needs at least three angles distinct modulo pi. Throws ReconstructionError for
/// too few angles or a rank-deficient design, PhysicalityError when the fitted
/// matrix is not positive-definite.
CovarianceFit reconstruct_covariance(std::span<const AngleVariance> scan);

/// Binned marginal distribution of one quadrature.
struct QuadratureHistogram {
    double theta = 0.0;
    double lower_edge = 0.0;
    double bin_width = 0.1;
    std::vector<double> counts;

    double bin_center(std::size_t i) const {
        return lower_edge + (static_cast<double>(i) + 0.5) * bin_width;
    }
    double total() const;
};

/// Histogram on bins symmetric about zero: [-half_range, half_range].
QuadratureHistogram make_histogram(const QuadratureSamples& samples, double half_range,
                                   double bin_width);

/// Square phase-space grid centred on the origin.
struct PhaseSpaceGrid {
    double half_width = 5.0;
    double step = 0.1;

    std::size_t points() const;
    double coordinate(std::size_t i) const;
};

/// Gaussian surface A exp(-(x - mean)^T cov^-1 (x - mean) / 2).
struct GaussianSurface {
    double amplitude = 0.0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
    std::size_t points_used = 0;
};

/// W(x1, x2) sampled on a grid; row index runs over x2, column over x1.
struct WignerMap {
    PhaseSpaceGrid grid;
    std::vector<double> values;

    std::size_t size() const { return grid.points(); }
    double at(std::size_t row, std::size_t col) const { return values[row * size() + col]; }
    double integral() const;
    Eigen::Vector2d mean() const;
    Eigen::Matrix2d covariance() const;
    /// Grid coordinates (x1, x2) of the maximum.
    Eigen::Vector2d peak() const;
    /// Least-squares Gaussian fit over the region where the fit exceeds `threshold` of its
    /// peak. Unlike the raw moments it ignores the low-level streaks a few-angle
    /// reconstruction leaves at large radius. Throws ReconstructionError on failure.
    GaussianSurface fit_gaussian(double threshold = 0.05) const;
};

struct BackprojectionOptions {
    /// Ramp-filter cutoff as a fraction of the histogram Nyquist frequency 1/(2 dq).
    double cutoff_fraction = 1.0;
    std::size_t threads = 1;
};

/// Filtered back-projection (inverse Radon with band-limited ramp filter) of quadrature
/// histograms into a Wigner function.
///
/// Requires >= 8 angles spread uniformly over [0, pi) with a common bin width.
WignerMap wigner_backprojection(std::span<const QuadratureHistogram> histograms,
                                const PhaseSpaceGrid& grid,
                                const BackprojectionOptions& options = {});

}  // namespace optotomo
