#pragma once

#include <stdexcept>
#include <string>

namespace tempattr {

enum class ErrorCode {
  LengthMismatch,
  ZeroVariance,
  NotPositiveDefinite,
  NonFinite,
  EmptyInput,
  BadMagic,
  TruncatedFile,
  MetaMismatch,
  DimMismatch,
  MissingPrecomputedRow,
  RowMismatch,
  OutOfRange,
  EmptySequence,
  BandTooNarrow,
  MissingCells,
  KOutOfRange,
  InvalidSpec,
  SpecGridMismatch,
  IoError,
  BadArgs,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception. what() is "<CodeName>: <message>", which the CLI
/// turns into its machine-parseable "ERROR <CodeName>: <message>" line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const char* code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace tempattr
