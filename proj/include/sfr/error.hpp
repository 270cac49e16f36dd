#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfr {

enum class ErrorCode {
    InvalidArgument,
    InvalidDataset,
    RankDeficient,
    DegenerateWeights,
    TooManyFailures,
    NeverOutOfBag,
    AllIterationsDegenerate,
    TooManySubsamples,
    NoConsensus,
    TooFewSamples,
    MissingColumn,
    NonNumericCell,
    EmptyAfterNaDrop,
    IoError,
};

/// Stable machine-readable name, e.g. "rank_deficient".
[[nodiscard]] std::string_view error_code_name(ErrorCode code) noexcept;

/// True for errors caused by bad input or configuration rather than by the
/// numerical content of the data.
[[nodiscard]] bool is_validation_error(ErrorCode code) noexcept;

/// True for errors that signal a degenerate (re)sample; resampling engines
/// drop such replicates instead of aborting.
[[nodiscard]] bool is_degenerate_sample_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sfr
