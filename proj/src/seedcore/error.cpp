#include "clustertet/error.hpp"

namespace clustertet {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonSkewSymmetric: return "NonSkewSymmetric";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NotABijection: return "NotABijection";
    case ErrorCode::SeedMismatch: return "SeedMismatch";
    case ErrorCode::SignIncoherent: return "SignIncoherent";
    case ErrorCode::LabelSetChanged: return "LabelSetChanged";
    case ErrorCode::LetterOutOfRange: return "LetterOutOfRange";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::DivergentModulus: return "DivergentModulus";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DeltaViolated: return "DeltaViolated";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::IntegerOverflow: return "IntegerOverflow";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

}  // namespace clustertet
