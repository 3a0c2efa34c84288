#include "oir/error.h"

namespace oir {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kSingularDesign: return "singular_design";
    case ErrorCode::kDegenerateInnovations: return "degenerate_innovations";
    case ErrorCode::kNoValidOrder: return "no_valid_order";
    case ErrorCode::kUnstableModel: return "unstable_model";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kDegenerateReduction: return "degenerate_reduction";
    case ErrorCode::kSingularMatrix: return "singular_matrix";
    case ErrorCode::kIllConditionedSpectrum: return "ill_conditioned_spectrum";
    case ErrorCode::kInvalidBand: return "invalid_band";
    case ErrorCode::kInvalidPartition: return "invalid_partition";
    case ErrorCode::kMultipletTooSmall: return "multiplet_too_small";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kZeroVariance: return "zero_variance";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

// Codes 1 and 2 are left to the CLI parser (usage errors).
int exit_code(ErrorCode code) { return 10 + static_cast<int>(code); }

}  // namespace oir
