#include "lyricsim/error.hpp"

namespace lyricsim {

std::string_view error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Usage: return "UsageError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::MalformedLexiconLine: return "MalformedLexiconLine";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateTrackId: return "DuplicateTrackId";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownPhoneme: return "UnknownPhoneme";
    case ErrorCode::InvalidFeatureTable: return "InvalidFeatureTable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingVector: return "MissingVector";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyHistogram: return "EmptyHistogram";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::TooFewDocuments: return "TooFewDocuments";
    case ErrorCode::NoKnownTokens: return "NoKnownTokens";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NotEnoughPairs: return "NotEnoughPairs";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::UnresolvedRange: return "UnresolvedRange";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::MissingProvider: return "MissingProvider";
    case ErrorCode::MissingObjective: return "MissingObjective";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    }
    return "Error";
}

ErrorClass error_class(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Usage: return ErrorClass::Usage;
    case ErrorCode::ConvergenceFailure: return ErrorClass::Numeric;
    default: return ErrorClass::Data;
    }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail)
    , code_(code)
    , detail_(detail)
{
}

} // namespace lyricsim
