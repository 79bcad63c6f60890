#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lyricsim {

/// Every contract violation the engine can report. The CLI maps these onto
/// exit codes through `error_class`.
enum class ErrorCode {
    // usage
    Usage,
    // data / contract
    Io,
    MalformedLexiconLine,
    MalformedRecord,
    DuplicateTrackId,
    DuplicateId,
    UnknownPhoneme,
    InvalidFeatureTable,
    DimensionMismatch,
    MissingVector,
    ZeroVector,
    TooShort,
    EmptyHistogram,
    EmptyVocabulary,
    TooFewDocuments,
    NoKnownTokens,
    InsufficientData,
    NotEnoughPairs,
    DegenerateDistribution,
    UnresolvedRange,
    DegenerateInput,
    InsufficientSamples,
    MissingProvider,
    MissingObjective,
    UnknownId,
    // numeric
    ConvergenceFailure,
};

enum class ErrorClass { Usage, Data, Numeric };

std::string_view error_name(ErrorCode code) noexcept;
ErrorClass error_class(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace lyricsim
