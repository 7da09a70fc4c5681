#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace predtest {

enum class ErrorCode {
    InvalidArgument,
    NonFiniteInput,
    SingularDesign,
    SingularRestriction,
    InvalidP0,
    InvalidLength,
    LengthMismatch,
    DegenerateVariance,
    InvalidProbability,
    NonConvergence,
    NotPositiveDefinite,
    NumericOverflow,
    UnknownPreset,
    InvalidKurtosis,
    InvalidDelta,
    InvalidGrid,
    EmptyReport,
    PlanParseError,
    FileNotFound,
    ColumnMissing,
    TooFewRows,
    CsvParseError,
};

/// Stable identifier used as the machine-readable prefix of CLI errors.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the aggregate statistic when one Bernoulli draw yields a
/// constant contrast sequence. Carries the 1-based draw index.
class DegenerateDrawError : public Error {
public:
    DegenerateDrawError(std::size_t draw, const std::string& message)
        : Error(ErrorCode::DegenerateVariance, message), draw_(draw) {}

    std::size_t draw() const noexcept { return draw_; }

private:
    std::size_t draw_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace predtest
