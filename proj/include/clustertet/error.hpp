#pragma once

#include <stdexcept>
#include <string>

namespace clustertet {

// Every failure raised by the library carries one of these codes so that
// callers (and the CLI) can distinguish, say, a seed mismatch from a numeric
// disagreement without parsing messages.
enum class ErrorCode {
    NonSkewSymmetric,
    DuplicateLabel,
    DimensionMismatch,
    UnknownVertex,
    NotABijection,
    SeedMismatch,
    SignIncoherent,
    LabelSetChanged,
    LetterOutOfRange,
    NotApplicable,
    QuadratureNotConverged,
    DomainViolation,
    DivergentModulus,
    NotNormalized,
    DeltaViolated,
    UnsupportedDimension,
    IntegerOverflow,
    ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace clustertet
