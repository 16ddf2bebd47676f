#pragma once

#include <stdexcept>
#include <string>

namespace foi {

enum class ErrorCode {
    // data model / ingestion
    UnknownIndicatorColumn,
    DuplicateCountry,
    NonNumericCell,
    ColumnTooSparse,
    InvalidIndicatorSpec,
    FixtureCorrupt,
    // rescaling / aggregation
    DegenerateRange,
    NoIndicatorsForIndex,
    // statistics
    TooFewPairs,
    TooFewRows,
    ZeroVariance,
    InvalidN,
    NotSymmetric,
    NotPositiveSemiDefinite,
    NoConvergence,
    SingularMatrix,
    Undefined,
    // clustering
    MissingCoordinate,
    InvalidK,
    LabelMismatch,
    // client
    NetworkError,
    HttpStatusError,
    MalformedResponse,
    UnknownDimension,
    // pipeline / output
    IncompleteIndices,
    IoError,
    InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Exception type used across the library. Carries a machine-checkable
/// code alongside the human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownIndicatorColumn: return "UnknownIndicatorColumn";
        case ErrorCode::DuplicateCountry: return "DuplicateCountry";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::ColumnTooSparse: return "ColumnTooSparse";
        case ErrorCode::InvalidIndicatorSpec: return "InvalidIndicatorSpec";
        case ErrorCode::FixtureCorrupt: return "FixtureCorrupt";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::NoIndicatorsForIndex: return "NoIndicatorsForIndex";
        case ErrorCode::TooFewPairs: return "TooFewPairs";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::InvalidN: return "InvalidN";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPositiveSemiDefinite: return "NotPositiveSemiDefinite";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::Undefined: return "Undefined";
        case ErrorCode::MissingCoordinate: return "MissingCoordinate";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::LabelMismatch: return "LabelMismatch";
        case ErrorCode::NetworkError: return "NetworkError";
        case ErrorCode::HttpStatusError: return "HttpStatusError";
        case ErrorCode::MalformedResponse: return "MalformedResponse";
        case ErrorCode::UnknownDimension: return "UnknownDimension";
        case ErrorCode::IncompleteIndices: return "IncompleteIndices";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

} // namespace foi
