#pragma once

#include <stdexcept>
#include <string>

namespace rkhs_embed {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied inconsistent or out-of-range arguments.
class InputError : public Error {
public:
    using Error::Error;
};

/// Duplicate centers or other inputs that make a Gram matrix singular by construction.
class DegenerateInputError : public InputError {
public:
    using InputError::InputError;
};

/// A dense sample request exceeds what the polyline resolution supports.
class ResolutionError : public InputError {
public:
    using InputError::InputError;
};

/// Config file problems; carries the offending key when there is one.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key = {})
        : Error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Gram factorization failed even at the largest admissible jitter.
class ConditioningError : public NumericalError {
public:
    ConditioningError(const std::string& what, double min_separation, long n)
        : NumericalError(what), min_separation_(min_separation), n_(n) {}
    double min_separation() const noexcept { return min_separation_; }
    long size() const noexcept { return n_; }

private:
    double min_separation_;
    long n_;
};

/// The design matrix of a Lyapunov problem is not Hurwitz.
class StabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Integration produced a non-finite state.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, double time)
        : NumericalError(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Orbit tracing never returned to its seed.
class NotClosedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Level drift exceeded tolerance even after step refinement.
class AccuracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Log-log regression had too few or non-positive samples.
class FitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace rkhs_embed
