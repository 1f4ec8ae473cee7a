#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace optotomo {

/// Real-to-complex / complex-to-real FFT of fixed length backed by FFTW.
///
/// Forward output holds n/2 + 1 bins. Inverse is unnormalised (multiply by 1/n).
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::span<const std::complex<double>> forward(std::span<const double> input);
    std::span<const double> inverse(std::span<const std::complex<double>> spectrum);

private:
    std::size_t n_;
    double* real_;
    std::complex<double>* spectrum_;
    void* forward_plan_;
    void* inverse_plan_;
};

}  // namespace optotomo
