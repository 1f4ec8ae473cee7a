#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace optotomo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range argument.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A requested quantity has no solution for the given parameters.
class UnsatisfiableError : public Error {
public:
    using Error::Error;
};

/// Operation precondition (sampling, resolution, lengths) not met.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Balanced homodyne readout used outside its strong-LO validity regime.
class ValidityError : public Error {
public:
    using Error::Error;
};

class ReconstructionError : public Error {
public:
    using Error::Error;
};

/// Covariance fit is not positive-definite; the raw fit is attached.
class PhysicalityError : public Error {
public:
    PhysicalityError(const std::string& what, double v11, double v22, double v12)
        : Error(what), v11(v11), v22(v22), v12(v12) {}
    double v11;
    double v22;
    double v12;
};

class CoverageError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

/// |H(f)|^2 below the allowed floor; `bins` lists the offending indices.
class DynamicRangeError : public Error {
public:
    DynamicRangeError(const std::string& what, std::vector<std::size_t> bins)
        : Error(what), bins(std::move(bins)) {}
    std::vector<std::size_t> bins;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace optotomo
