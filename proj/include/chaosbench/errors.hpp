#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chaos {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A system specification is malformed (unknown system, missing or NaN parameter).
class InvalidSpecError : public Error {
public:
    using Error::Error;
};

/// An argument violates a precondition (shape mismatch, non-finite input, untrained model).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// A trajectory or forecast left the admissible state region.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_index(step) {}
    std::size_t step_index;
};

/// Not enough rows to form at least one regression pair.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Unregularized least squares on a rank-deficient design matrix.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

/// Random reservoir construction failed (zero matrix, spectral radius estimate did not converge).
class InitializationError : public Error {
public:
    using Error::Error;
};

/// Training loss became non-finite.
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int epoch)
        : Error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_index(epoch) {}
    int epoch_index;
};

/// Malformed configuration or suite file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem problem while reading or writing an artifact.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chaos
