#include "kserver/error.hpp"

namespace kserver {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::Overlap: return "Overlap";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::InconsistentRow: return "InconsistentRow";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::ReconstructionFailure: return "ReconstructionFailure";
    case ErrorCode::NotATreeMetric: return "NotATreeMetric";
    case ErrorCode::IncompatibleAlgorithmMetric: return "IncompatibleAlgorithmMetric";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::TooManyOpenServers: return "TooManyOpenServers";
    case ErrorCode::RequestOutsideMetric: return "RequestOutsideMetric";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::SequenceMismatch: return "SequenceMismatch";
    case ErrorCode::ProductNotZero: return "ProductNotZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::size_t> witness)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      witness_(std::move(witness)) {}

}  // namespace kserver
