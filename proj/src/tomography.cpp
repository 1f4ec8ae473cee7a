#include "optotomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Dense>

#include "optotomo/constants.hpp"
#include "optotomo/errors.hpp"

namespace optotomo {

namespace {

double wrap_to_pi(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    // fmod can leave values within rounding of pi.
    if (kPi - t < 1e-12) t = 0.0;
    return t;
}

// Distinct angles modulo pi, sorted.
std::vector<double> distinct_angles(const std::vector<double>& angles, double tolerance) {
    std::vector<double> wrapped;
    wrapped.reserve(angles.size());
    for (double a : angles) wrapped.push_back(wrap_to_pi(a));
    std::sort(wrapped.begin(), wrapped.end());
    std::vector<double> unique;
    for (double a : wrapped) {
        if (unique.empty() || a - unique.back() > tolerance) unique.push_back(a);
    }
    if (unique.size() > 1 && unique.front() + kPi - unique.back() <= tolerance) unique.pop_back();
    return unique;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

// Spatial kernel of the ramp filter |nu| band-limited to |nu| <= cutoff.
double ramp_kernel(double t, double cutoff) {
    const double s = sinc(cutoff * t);
    return cutoff * cutoff * (2.0 * sinc(2.0 * cutoff * t) - s * s);
}

}  // namespace

bool CovarianceFit::satisfies_uncertainty(double tolerance) const {
    return determinant() >= 0.25 - tolerance;
}

CovarianceFit reconstruct_covariance(std::span<const AngleVariance> scan) {
    std::vector<double> angles;
    angles.reserve(scan.size());
    for (const auto& point : scan) {
        if (!std::isfinite(point.theta) || !std::isfinite(point.variance)) {
            throw ReconstructionError("scan contains non-finite entries");
        }
        if (point.variance <= 0.0) throw ReconstructionError("measured variances must be positive");
        angles.push_back(point.theta);
    }
    const auto unique = distinct_angles(angles, 1e-9);
    if (unique.size() < 3) {
        throw ReconstructionError("need at least 3 angles distinct modulo pi, got " +
                                  std::to_string(unique.size()));
    }

    Eigen::MatrixXd design(scan.size(), 3);
    Eigen::VectorXd rhs(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const double c = std::cos(scan[i].theta);
        const double s = std::sin(scan[i].theta);
        design(i, 0) = c * c;
        design(i, 1) = s * s;
        design(i, 2) = 2.0 * s * c;
        rhs(i) = scan[i].variance;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw ReconstructionError("rank-deficient angle design");
    const Eigen::Vector3d params = qr.solve(rhs);

    CovarianceFit fit;
    fit.covariance << params(0), params(2), params(2), params(1);
    fit.distinct_angles = unique.size();
    fit.residual_rms = std::sqrt((design * params - rhs).squaredNorm() /
                                 static_cast<double>(scan.size()));
    if (!(params(0) > 0.0) || !(fit.covariance.determinant() > 0.0)) {
        throw PhysicalityError("reconstructed covariance is not positive-definite", params(0),
                               params(1), params(2));
    }
    return fit;
}

double QuadratureHistogram::total() const {
    double sum = 0.0;
    for (double c : counts) sum += c;
    return sum;
}

QuadratureHistogram make_histogram(const QuadratureSamples& samples, double half_range,
                                   double bin_width) {
    if (!(half_range > 0.0) || !(bin_width > 0.0)) {
        throw DomainError("histogram range and bin width must be positive");
    }
    const auto bins = static_cast<std::size_t>(std::ceil(2.0 * half_range / bin_width));
    QuadratureHistogram hist;
    hist.theta = samples.angle;
    hist.bin_width = bin_width;
    hist.lower_edge = -0.5 * static_cast<double>(bins) * bin_width;
    hist.counts.assign(bins, 0.0);
    for (double v : samples.values) {
        const double pos = (v - hist.lower_edge) / bin_width;
        if (pos < 0.0 || pos >= static_cast<double>(bins)) continue;
        hist.counts[static_cast<std::size_t>(pos)] += 1.0;
    }
    return hist;
}

std::size_t PhaseSpaceGrid::points() const {
    return 2 * static_cast<std::size_t>(std::llround(half_width / step)) + 1;
}

double PhaseSpaceGrid::coordinate(std::size_t i) const {
    const auto half = static_cast<double>(points() / 2);
    return (static_cast<double>(i) - half) * step;
}

double WignerMap::integral() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * grid.step * grid.step;
}

Eigen::Vector2d WignerMap::mean() const {
    const std::size_t n = size();
    Eigen::Vector2d m = Eigen::Vector2d::Zero();
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double w = at(r, c);
            m(0) += w * grid.coordinate(c);
            m(1) += w * grid.coordinate(r);
            norm += w;
        }
    }
    return m / norm;
}

Eigen::Matrix2d WignerMap::covariance() const {
    const std::size_t n = size();
    const Eigen::Vector2d m = mean();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double w = at(r, c);
            const Eigen::Vector2d d(grid.coordinate(c) - m(0), grid.coordinate(r) - m(1));
            cov += w * d * d.transpose();
            norm += w;
        }
    }
    return cov / norm;
}

Eigen::Vector2d WignerMap::peak() const {
    const auto it = std::max_element(values.begin(), values.end());
    const auto index = static_cast<std::size_t>(it - values.begin());
    return {grid.coordinate(index % size()), grid.coordinate(index / size())};
}

GaussianSurface WignerMap::fit_gaussian(double threshold) const {
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("threshold must lie in (0, 1)");
    const double top = *std::max_element(values.begin(), values.end());
    if (!(top > 0.0)) throw ReconstructionError("Wigner map has no positive peak");
    const std::size_t n = size();
    auto x_of = [&](std::size_t i) { return Eigen::Vector2d(grid.coordinate(i % n), grid.coordinate(i / n)); };

    // Start: ln W quadratic over the upper part of the peak, weighted by W.
    std::vector<std::size_t> core;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.3 * top) core.push_back(i);
    }
    if (core.size() < 6) throw ReconstructionError("too few points for a Gaussian fit");
    Eigen::MatrixXd design(core.size(), 6);
    Eigen::VectorXd rhs(core.size());
    for (std::size_t k = 0; k < core.size(); ++k) {
        const Eigen::Vector2d x = x_of(core[k]);
        const double w = values[core[k]];
        design.row(static_cast<Eigen::Index>(k)) << w, w * x(0), w * x(1), w * x(0) * x(0), w * x(0) * x(1), w * x(1) * x(1);
        rhs(static_cast<Eigen::Index>(k)) = w * std::log(w);
    }
    const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
    Eigen::Matrix2d precision;
    precision << -2.0 * c(3), -c(4), -c(4), -2.0 * c(5);
    if (Eigen::LLT<Eigen::Matrix2d>(precision).info() != Eigen::Success) {
        throw ReconstructionError("fitted surface is not a Gaussian");
    }
    Eigen::Vector2d mean = precision.inverse() * Eigen::Vector2d(c(1), c(2));
    double amplitude = std::exp(c(0) + 0.5 * mean.dot(precision * mean));

    // Refine by Gauss-Newton in linear space over the region where the model exceeds
    // `threshold` of its peak. The region follows the model, not the data, so noise
    // does not bias which points enter.
    std::vector<std::size_t> region;
    for (int pass = 0; pass < 2; ++pass) {
        region.clear();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const Eigen::Vector2d d = x_of(i) - mean;
            if (0.5 * d.dot(precision * d) < -std::log(threshold)) region.push_back(i);
        }
        if (region.size() < 6) throw ReconstructionError("too few points for a Gaussian fit");
        for (int iter = 0; iter < 30; ++iter) {
            Eigen::MatrixXd jac(region.size(), 6);
            Eigen::VectorXd res(region.size());
            for (std::size_t k = 0; k < region.size(); ++k) {
                const Eigen::Vector2d d = x_of(region[k]) - mean;
                const double g = std::exp(-0.5 * d.dot(precision * d));
                const double m = amplitude * g;
                const Eigen::Vector2d pd = precision * d;
                const auto row = static_cast<Eigen::Index>(k);
                jac.row(row) << g, m * pd(0), m * pd(1), -0.5 * m * d(0) * d(0), -m * d(0) * d(1), -0.5 * m * d(1) * d(1);
                res(row) = values[region[k]] - m;
            }
            const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(res);
            amplitude += step(0);
            mean += Eigen::Vector2d(step(1), step(2));
            precision(0, 0) += step(3);
            precision(0, 1) += step(4);
            precision(1, 0) += step(4);
            precision(1, 1) += step(5);
            if (Eigen::LLT<Eigen::Matrix2d>(precision).info() != Eigen::Success || !(amplitude > 0.0)) {
                throw ReconstructionError("Gaussian fit diverged");
            }
            if (step.cwiseAbs().maxCoeff() < 1e-12 * (1.0 + precision.cwiseAbs().maxCoeff() + amplitude)) break;
        }
    }

    GaussianSurface fit;
    fit.amplitude = amplitude;
    fit.mean = mean;
    fit.covariance = precision.inverse();
    fit.points_used = region.size();
    return fit;
}

WignerMap wigner_backprojection(std::span<const QuadratureHistogram> histograms,
                                const PhaseSpaceGrid& grid, const BackprojectionOptions& options) {
    if (histograms.size() < 8) {
        throw CoverageError("back-projection needs at least 8 angles, got " +
                            std::to_string(histograms.size()));
    }
    if (!(grid.step > 0.0) || !(grid.half_width > 0.0)) {
        throw DomainError("grid step and half width must be positive");
    }
    if (!(options.cutoff_fraction > 0.0 && options.cutoff_fraction <= 1.0)) {
        throw DomainError("cutoff_fraction must lie in (0, 1]");
    }
    const double dq = histograms.front().bin_width;
    for (const auto& h : histograms) {
        if (std::abs(h.bin_width - dq) > 1e-12 * dq) {
            throw DataError("histograms must share a common bin width");
        }
        if (h.counts.empty() || !(h.total() > 0.0)) throw DataError("empty histogram");
    }

    // Angular coverage: sorted angles modulo pi, no gap wider than 1.5 nominal spacings.
    const std::size_t n_angles = histograms.size();
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < n_angles; ++i) order.emplace_back(wrap_to_pi(histograms[i].theta), i);
    std::sort(order.begin(), order.end());
    const double nominal = kPi / static_cast<double>(n_angles);
    std::vector<double> weight(n_angles);
    for (std::size_t k = 0; k < n_angles; ++k) {
        const double prev = k == 0 ? order.back().first - kPi : order[k - 1].first;
        const double next = k + 1 == n_angles ? order.front().first + kPi : order[k + 1].first;
        const double gap = next - order[k].first;
        if (gap > 1.5 * nominal) {
            throw CoverageError("angles do not cover [0, pi) uniformly: gap of " +
                                std::to_string(gap) + " rad");
        }
        weight[order[k].second] = 0.5 * (next - prev);
    }

    const double cutoff = options.cutoff_fraction / (2.0 * dq);
    const std::size_t n = grid.points();

    // Filtered projection on the histogram bin centres.
    auto project = [&](std::size_t a, std::vector<double>& image) {
        const auto& h = histograms[a];
        const std::size_t bins = h.counts.size();
        const double norm = 1.0 / (h.total() * dq);
        std::vector<double> kernel(bins);
        for (std::size_t k = 0; k < bins; ++k) kernel[k] = ramp_kernel(static_cast<double>(k) * dq, cutoff);
        std::vector<double> filtered(bins, 0.0);
        for (std::size_t k = 0; k < bins; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < bins; ++j) {
                const std::size_t lag = k > j ? k - j : j - k;
                acc += kernel[lag] * h.counts[j];
            }
            filtered[k] = acc * norm * dq;
        }
        const double c = std::cos(h.theta);
        const double s = std::sin(h.theta);
        const double w = weight[a];
        image.assign(n * n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double x2 = grid.coordinate(r);
            for (std::size_t col = 0; col < n; ++col) {
                const double q = c * grid.coordinate(col) + s * x2;
                const double pos = (q - h.lower_edge) / dq - 0.5;
                if (pos < 0.0 || pos > static_cast<double>(bins - 1)) continue;
                const auto i0 = static_cast<std::size_t>(pos);
                const std::size_t i1 = std::min(i0 + 1, bins - 1);
                const double frac = pos - static_cast<double>(i0);
                image[r * n + col] = w * ((1.0 - frac) * filtered[i0] + frac * filtered[i1]);
            }
        }
    };

    std::vector<std::vector<double>> contributions(n_angles);
    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, n_angles);
    if (threads == 1) {
        for (std::size_t a = 0; a < n_angles; ++a) project(a, contributions[a]);
    } else {
        std::vector<std::thread> workers;
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t a = t; a < n_angles; a += threads) project(a, contributions[a]);
            });
        }
        for (auto& worker : workers) worker.join();
    }

    // Fixed summation order keeps the map bit-identical for any thread count.
    WignerMap map{grid, std::vector<double>(n * n, 0.0)};
    for (const auto& image : contributions) {
        for (std::size_t i = 0; i < image.size(); ++i) map.values[i] += image[i];
    }
    return map;
}

}  // namespace optotomo
