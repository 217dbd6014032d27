#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tensorstat {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, bad arguments, unreadable files.
class InputError : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition does not hold (singular, not PD, ...).
class MathError : public Error {
public:
    using Error::Error;
};

class ShapeError : public InputError {
public:
    using InputError::InputError;
};

class ArgumentError : public InputError {
public:
    using InputError::InputError;
};

class FormatError : public InputError {
public:
    using InputError::InputError;
};

class UnsupportedKernelError : public InputError {
public:
    using InputError::InputError;
};

class SingularityError : public MathError {
public:
    SingularityError(const std::string& what, double rcond)
        : MathError(what), rcond_(rcond) {}

    /// Reciprocal condition estimate of the rejected matricization.
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

class SymmetryError : public MathError {
public:
    SymmetryError(const std::string& what, double residual)
        : MathError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class DefinitenessError : public MathError {
public:
    DefinitenessError(const std::string& what, std::size_t pivot)
        : MathError(what), pivot_(pivot) {}

    /// Flat (matricized) index of the first non-positive pivot.
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class DegenerateVarianceError : public MathError {
public:
    DegenerateVarianceError(const std::string& what, std::vector<std::size_t> index)
        : MathError(what), index_(std::move(index)) {}

    /// Zero-based multi-index of the offending cell.
    const std::vector<std::size_t>& index() const noexcept { return index_; }

private:
    std::vector<std::size_t> index_;
};

}  // namespace tensorstat
