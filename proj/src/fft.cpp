#include "optotomo/fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

#include <fftw3.h>

#include "optotomo/errors.hpp"

namespace optotomo {

namespace {
// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n < 2) throw DomainError("FFT length must be at least 2");
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    spectrum_ = static_cast<std::complex<double>*>(
        fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    if (real_ == nullptr || spectrum_ == nullptr) {
        fftw_free(real_);
        fftw_free(spectrum_);
        throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* spec = reinterpret_cast<fftw_complex*>(spectrum_);
    forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
        fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    }
    fftw_free(real_);
    fftw_free(spectrum_);
}

std::span<const std::complex<double>> RealFft::forward(std::span<const double> input) {
    if (input.size() != n_) throw PreconditionError("FFT input length mismatch");
    std::copy(input.begin(), input.end(), real_);
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    return {spectrum_, n_ / 2 + 1};
}

std::span<const double> RealFft::inverse(std::span<const std::complex<double>> spectrum) {
    if (spectrum.size() != n_ / 2 + 1) throw PreconditionError("FFT spectrum length mismatch");
    // c2r overwrites its input, so work on the internal buffer.
    std::copy(spectrum.begin(), spectrum.end(), spectrum_);
    fftw_execute(static_cast<fftw_plan>(inverse_plan_));
    return {real_, n_};
}

}  // namespace optotomo
