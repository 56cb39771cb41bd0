#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kserver {

enum class ErrorCode {
  // metric-core
  NotSquare,
  Asymmetric,
  NegativeEntry,
  NonzeroDiagonal,
  TriangleViolation,
  // tspan
  EmptySide,
  Overlap,
  TooManyPoints,
  BaseMismatch,
  InconsistentRow,
  DeltaOutOfRange,
  ContractViolation,
  ReconstructionFailure,
  // servers / simulation / optimal / analysis
  NotATreeMetric,
  IncompatibleAlgorithmMetric,
  EmptyPool,
  TooManyOpenServers,
  RequestOutsideMetric,
  SizeMismatch,
  SequenceMismatch,
  ProductNotZero,
  // plumbing
  InvalidArgument,
  Parse,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode code);

/// Library exception. `witness` carries point indices that name the offending
/// entries (for example the (x, z, y) of a triangle violation d(x,z) > d(x,y) + d(y,z)).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::size_t> witness = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> witness_;
};

}  // namespace kserver
