#include "wildfire/error.hpp"

namespace wildfire {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::CellCountMismatch: return "CellCountMismatch";
    case ErrorCode::NonNumericToken: return "NonNumericToken";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::EmptyLayer: return "EmptyLayer";
    case ErrorCode::NonPointGeometry: return "NonPointGeometry";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::UnknownYear: return "UnknownYear";
    case ErrorCode::InvalidMonth: return "InvalidMonth";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::TooFewValidCells: return "TooFewValidCells";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptyHistogram: return "EmptyHistogram";
    case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::EmptyTestAfterBuffer: return "EmptyTestAfterBuffer";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::FeatureMismatch: return "FeatureMismatch";
    case ErrorCode::NotSupported: return "NotSupported";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptySeason: return "EmptySeason";
    case ErrorCode::TooFewCells: return "TooFewCells";
    case ErrorCode::InvalidClassValue: return "InvalidClassValue";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

ErrorClass classify_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
      return ErrorClass::Config;
    case ErrorCode::NoConvergence:
    case ErrorCode::SingleClass:
    case ErrorCode::TooFewSamples:
    case ErrorCode::TooFewValidCells:
    case ErrorCode::TooFewCells:
    case ErrorCode::InsufficientCandidates:
    case ErrorCode::EmptyTestAfterBuffer:
    case ErrorCode::EmptySeason:
      return ErrorClass::Numeric;
    default:
      return ErrorClass::Input;
  }
}

}  // namespace wildfire
