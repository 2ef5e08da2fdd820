#pragma once

#include <stdexcept>
#include <string>

namespace bellfield {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// argument outside the mathematical domain (e.g. Ci(x<=0))
struct DomainError : Error {
    using Error::Error;
};

// requested quantity diverges for these parameters
struct DivergenceError : Error {
    using Error::Error;
};

// result would overflow the representable range
struct RangeError : Error {
    using Error::Error;
};

struct MatrixError : Error {
    using Error::Error;
};

struct ConditioningError : MatrixError {
    ConditioningError(const std::string& what, double cond)
        : MatrixError(what), condition(cond) {}
    double condition;
};

struct UnphysicalStateError : Error {
    UnphysicalStateError(const std::string& what, double det)
        : Error(what), det_gamma(det) {}
    double det_gamma;
};

// iterative procedure gave up; keeps what it had
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double best, double bound)
        : Error(what), estimate(best), error_bound(bound) {}
    double estimate;
    double error_bound;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace bellfield
