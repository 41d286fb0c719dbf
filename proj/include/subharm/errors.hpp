#pragma once

#include <stdexcept>
#include <string>

namespace subharm {

/// Bad input to an operation (dimension mismatch, out-of-domain parameter).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Query outside the range where a quantity is resolved.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Unreadable or malformed input file, unwritable output.
class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Base for failures of a numerical method on valid input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double final_residual)
        : NumericError(what), final_residual_(final_residual) {}
    double final_residual() const noexcept { return final_residual_; }

private:
    double final_residual_;
};

class DegenerateSolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

class ContinuationError : public NumericError {
public:
    ContinuationError(const std::string& what, double last_good)
        : NumericError(what), last_good_(last_good) {}
    double last_good_value() const noexcept { return last_good_; }

private:
    double last_good_;
};

/// Critical-branch tracking could not decide between candidate eigenvectors.
class TrackingError : public NumericError {
public:
    using NumericError::NumericError;
};

class BlowUpError : public NumericError {
public:
    BlowUpError(const std::string& what, double last_finite_time)
        : NumericError(what), last_finite_time_(last_finite_time) {}
    double last_finite_time() const noexcept { return last_finite_time_; }

private:
    double last_finite_time_;
};

/// Modulation extraction failed (warp not invertible).
class ExtractionError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A 1/(1 - psi_x) factor blew up.
class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Fixed-point iteration stopped contracting.
class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace subharm
