#include "sfr/error.hpp"

namespace sfr {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::InvalidDataset: return "invalid_dataset";
        case ErrorCode::RankDeficient: return "rank_deficient";
        case ErrorCode::DegenerateWeights: return "degenerate_weights";
        case ErrorCode::TooManyFailures: return "too_many_failures";
        case ErrorCode::NeverOutOfBag: return "never_out_of_bag";
        case ErrorCode::AllIterationsDegenerate: return "all_iterations_degenerate";
        case ErrorCode::TooManySubsamples: return "too_many_subsamples";
        case ErrorCode::NoConsensus: return "no_consensus";
        case ErrorCode::TooFewSamples: return "too_few_samples";
        case ErrorCode::MissingColumn: return "missing_column";
        case ErrorCode::NonNumericCell: return "non_numeric_cell";
        case ErrorCode::EmptyAfterNaDrop: return "empty_after_na_drop";
        case ErrorCode::IoError: return "io_error";
    }
    return "unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidDataset:
        case ErrorCode::MissingColumn:
        case ErrorCode::NonNumericCell:
        case ErrorCode::EmptyAfterNaDrop:
        case ErrorCode::IoError:
            return true;
        default:
            return false;
    }
}

bool is_degenerate_sample_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::RankDeficient:
        case ErrorCode::DegenerateWeights:
        case ErrorCode::NeverOutOfBag:
        case ErrorCode::AllIterationsDegenerate:
        case ErrorCode::NoConsensus:
            return true;
        default:
            return false;
    }
}

}  // namespace sfr
