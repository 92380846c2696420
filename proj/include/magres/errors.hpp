#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace magres {

/// Invalid user-supplied configuration (material, genome, experiment settings).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A field evaluation produced a NaN or infinity.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t cell)
        : std::runtime_error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell) {}

    std::size_t cell() const noexcept { return cell_; }

private:
    std::size_t cell_;
};

/// The integrator lost the unit-norm constraint by more than its tolerance.
///
/// `input_index` is filled in by the reservoir drive loop, and stays -1 when
/// the error comes straight from the integrator.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, double drift, long input_index = -1)
        : std::runtime_error(what), drift_(drift), input_index_(input_index) {}

    double drift() const noexcept { return drift_; }
    long input_index() const noexcept { return input_index_; }

private:
    double drift_;
    long input_index_;
};

/// The ridge system is singular (rank-deficient design with lambda = 0).
class SingularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A task data file could not be read.
class IngestionError : public std::runtime_error {
public:
    IngestionError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace magres
