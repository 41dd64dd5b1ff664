#pragma once

#include <stdexcept>
#include <string>

namespace wildfire {

enum class ErrorCode {
  // raster / stacking
  OutOfBounds,
  NoOverlap,
  DimensionMismatch,
  DuplicateName,
  FrameMismatch,
  // ingest
  MalformedHeader,
  CellCountMismatch,
  NonNumericToken,
  IoFailure,
  MalformedJson,
  UnsupportedGeometry,
  MalformedCsv,
  EmptyLayer,
  NonPointGeometry,
  NonPositiveRadius,
  UnknownCategory,
  // temporal
  EmptyBand,
  UnknownYear,
  InvalidMonth,
  // imputation
  InvalidK,
  InvalidRadius,
  TooFewValidCells,
  // diagnostics
  TooFewSamples,
  EmptyHistogram,
  // sampling
  InsufficientCandidates,
  EmptyTestAfterBuffer,
  // models
  EmptyData,
  SingleClass,
  NoConvergence,
  FeatureMismatch,
  NotSupported,
  // evaluation
  LengthMismatch,
  EmptyInput,
  EmptySeason,
  // risk map
  TooFewCells,
  InvalidClassValue,
  // cli / config
  ConfigError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class ErrorClass { Config, Input, Numeric };

/// Buckets an error code into the CLI exit-code classes (2, 3, 4).
ErrorClass classify_error(ErrorCode code);

}  // namespace wildfire
