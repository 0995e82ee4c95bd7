#include "nashnet/errors.hpp"

namespace nashnet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRowSum: return "RowSumError";
    case ErrorCode::kZeroDiagonal: return "ZeroDiagonal";
    case ErrorCode::kNotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::kSpectral: return "SpectralError";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kNotStronglyMonotone: return "NotStronglyMonotone";
    case ErrorCode::kInvalidParticipation: return "InvalidParticipation";
    case ErrorCode::kNoAdmissibleStep: return "NoAdmissibleStep";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "UnknownError";
}

void require_dim(std::size_t a, std::size_t b, std::string_view context) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(context) + ": expected size " + std::to_string(b) +
                    ", got " + std::to_string(a));
  }
}

}  // namespace nashnet
