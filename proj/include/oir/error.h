#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oir {

enum class ErrorCode {
  kInvalidArgument = 1,
  kSingularDesign,
  kDegenerateInnovations,
  kNoValidOrder,
  kUnstableModel,
  kConvergence,
  kDegenerateReduction,
  kSingularMatrix,
  kIllConditionedSpectrum,
  kInvalidBand,
  kInvalidPartition,
  kMultipletTooSmall,
  kParse,
  kZeroVariance,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Process exit status used by the CLI for each error kind (0 is success).
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// DARE iteration ran out of budget; carries the last relative change.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(ErrorCode::kConvergence, what),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Hermitian block lost positive definiteness at some grid frequency.
class SpectrumError : public Error {
 public:
  SpectrumError(const std::string& what, double freq_hz)
      : Error(ErrorCode::kIllConditionedSpectrum, what), freq_hz_(freq_hz) {}

  double freq_hz() const { return freq_hz_; }

 private:
  double freq_hz_;
};

}  // namespace oir
