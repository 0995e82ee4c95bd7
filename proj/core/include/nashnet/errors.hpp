#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nashnet {

/// Error categories. The numeric value doubles as the CLI exit code.
enum class ErrorCode : int {
  kDimensionMismatch = 10,
  kRowSum = 20,
  kZeroDiagonal = 21,
  kNotStronglyConnected = 22,
  kSpectral = 23,
  kConvergenceFailure = 30,
  kNotStronglyMonotone = 40,
  kInvalidParticipation = 41,
  kNoAdmissibleStep = 50,
  kNonFiniteState = 60,
  kConfig = 70,
  kIo = 80,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

// Requires a == b, throwing kDimensionMismatch with `context` otherwise.
void require_dim(std::size_t a, std::size_t b, std::string_view context);

}  // namespace nashnet
