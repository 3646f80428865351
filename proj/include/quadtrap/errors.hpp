#pragma once

#include <stdexcept>
#include <string>

namespace quadtrap {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameter values (non-positive radius, invalid scale factor, ...).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a special function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Field evaluation requested on (or too close to) a conductor filament.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Configuration cannot support the requested computation
/// (zero currents, proportional loop pair, flat profile, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Gradient tensor asymmetry beyond tolerance at the evaluation point.
class AsymmetryError : public Error {
public:
    using Error::Error;
};

/// Iteration failed to converge; carries the final residual.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

/// Nonlinear fit did not converge; carries the final residual.
class FitFailureError : public Error {
public:
    FitFailureError(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

/// Optimization found no feasible configuration in the search bounds.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Too few samples to perform a fit.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Samples present but inconsistent with the model being fitted.
class InvalidDataError : public Error {
public:
    using Error::Error;
};

/// Malformed input document; position is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(msg), line(line), column(column) {}
    int line;
    int column;
};

}  // namespace quadtrap
