#include "predtest/error.hpp"

namespace predtest {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::SingularRestriction: return "SingularRestriction";
    case ErrorCode::InvalidP0: return "InvalidP0";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::InvalidKurtosis: return "InvalidKurtosis";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::PlanParseError: return "PlanParseError";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ColumnMissing: return "ColumnMissing";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::CsvParseError: return "CsvParseError";
    }
    return "Unknown";
}

} // namespace predtest
