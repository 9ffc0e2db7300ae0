#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kernelcut {

enum class ErrorCode {
  EmptyInput,
  UnassignedFpr,
  MalformedSchedule,
  NotEvaluated,
  IncompatibleParents,
  InsufficientSurvivors,
  InstanceTooLarge,
  UnscheduledFpr,
  ParseError,
  InvalidOrderBook,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for every failure the library reports; callers switch
// on code() rather than catching distinct classes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kernelcut
