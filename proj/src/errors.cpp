#include "tempattr/errors.hpp"

namespace tempattr {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::MetaMismatch: return "MetaMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::MissingPrecomputedRow: return "MissingPrecomputedRow";
    case ErrorCode::RowMismatch: return "RowMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::BandTooNarrow: return "BandTooNarrow";
    case ErrorCode::MissingCells: return "MissingCells";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SpecGridMismatch: return "SpecGridMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadArgs: return "BadArgs";
  }
  return "Unknown";
}

}  // namespace tempattr
