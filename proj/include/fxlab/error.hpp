#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fxlab {

enum class ErrorCode {
  EmptyGraph,
  NodeOutOfRange,
  SelfLoop,
  DuplicateEdge,
  NonPositiveWeight,
  RowNotStochastic,
  NotStronglyConnected,
  WeightedUndirected,
  ParseError,
  DirectedUnsupported,
  TooLarge,
  SolverSingular,
  ExcessiveTimeouts,
  InvalidArgument,
  ConfigError,
  OracleFailure,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fxlab
