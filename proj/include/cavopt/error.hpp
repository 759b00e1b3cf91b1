#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cavopt {

/// Error kinds surfaced to callers and to the CLI as machine-readable
/// `error.kind` strings. Kinds map onto process exit codes: caps (TooLarge,
/// CapExceeded) exit 3, everything else exits 2.
enum class ErrorKind {
    Syntax,
    Validation,
    NotASolution,
    NotSatisfying,
    ConstraintViolation,
    InvalidPenalty,
    TooLarge,
    NonPositiveWeight,
    OutOfRange,
    NormDrift,
    CapExceeded,
    Unbalanced,
    ConvergenceError,
    MissingSideCavity,
    VerificationFailed,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::NotSatisfying: return "NotSatisfying";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::InvalidPenalty: return "InvalidPenalty";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NormDrift: return "NormDrift";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::Unbalanced: return "Unbalanced";
    case ErrorKind::ConvergenceError: return "ConvergenceError";
    case ErrorKind::MissingSideCavity: return "MissingSideCavity";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    const char* kind_name() const noexcept { return error_kind_name(kind_); }

    /// true for resource-cap errors (exit code 3 at the CLI).
    bool is_cap() const noexcept {
        return kind_ == ErrorKind::TooLarge || kind_ == ErrorKind::CapExceeded;
    }

private:
    ErrorKind kind_;
};

}  // namespace cavopt
