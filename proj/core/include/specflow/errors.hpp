#pragma once

#include <stdexcept>
#include <string>

namespace specflow {

// Failure taxonomy. The CLI maps kinds to exit codes: validation errors
// exit 2, numerical failures exit 3, cross-check mismatches exit 4.
enum class ErrorKind {
  InvalidInput,
  SpectralBoundaryCollision,
  ClusterAmbiguity,
  NotEquivariant,
  NotInvariant,
  PartitionFailure,
  InvalidPartition,
  InvalidConcat,
  DegenerateRank,
  DegenerateEndpoint,
  InternalInconsistency,
  UseNumericOracle,
  NoConvergence,
  OutOfScope,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::SpectralBoundaryCollision: return "SpectralBoundaryCollision";
    case ErrorKind::ClusterAmbiguity: return "ClusterAmbiguity";
    case ErrorKind::NotEquivariant: return "NotEquivariant";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::PartitionFailure: return "PartitionFailure";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::InvalidConcat: return "InvalidConcat";
    case ErrorKind::DegenerateRank: return "DegenerateRank";
    case ErrorKind::DegenerateEndpoint: return "DegenerateEndpoint";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::UseNumericOracle: return "UseNumericOracle";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OutOfScope: return "OutOfScope";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

}  // namespace specflow
