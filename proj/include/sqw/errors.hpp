// errors.hpp — error kinds shared by all sqw modules
#pragma once

#include <stdexcept>
#include <string>

namespace sqw {

enum class ErrorCode {
  DisconnectedGraph,
  SelfLoop,
  DuplicateEdge,
  TooFewVertices,
  InvalidNeighborOrder,
  InvalidSuccessor,
  NotNormal,
  ConvergenceFailure,
  NonUnitOmega,
  MissingDegree,
  NotUnitary,
  FamilyMismatch,
  NotRegular,
  NotTorus,
  OddSize,
  ComplementEmpty,
  DimensionMismatch,
  GraphMismatch,
  AlphaZero,
  OutOfRange,
  TooLarge,
  BadState,
  WindowTooSmall,
  InvalidInput,
  IoError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::InvalidNeighborOrder: return "InvalidNeighborOrder";
    case ErrorCode::InvalidSuccessor: return "InvalidSuccessor";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NonUnitOmega: return "NonUnitOmega";
    case ErrorCode::MissingDegree: return "MissingDegree";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NotTorus: return "NotTorus";
    case ErrorCode::OddSize: return "OddSize";
    case ErrorCode::ComplementEmpty: return "ComplementEmpty";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GraphMismatch: return "GraphMismatch";
    case ErrorCode::AlphaZero: return "AlphaZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadState: return "BadState";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sqw
