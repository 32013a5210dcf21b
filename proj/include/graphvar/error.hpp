#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphvar {

enum class ErrorCode {
    NonPositiveWeight,
    NonPositiveMeasure,
    SelfLoop,
    DuplicateEdge,
    DanglingEdge,
    DuplicateVertex,
    UnknownVertex,
    DomainMismatch,
    NonFiniteValue,
    BadParam,
    SingularExponent,
    NonPositivePotential,
    InconsistentDerivative,
    MissingEnvelope,
    HypothesisFailed,
    NoConvergence,
    ConvergedToKnown,
    FoundFewer,
    IoError,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this type; `code()`
/// lets callers (notably the CLI exit-code mapping) branch on the kind.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::NonPositiveMeasure: return "NonPositiveMeasure";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::DanglingEdge: return "DanglingEdge";
        case ErrorCode::DuplicateVertex: return "DuplicateVertex";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::BadParam: return "BadParam";
        case ErrorCode::SingularExponent: return "SingularExponent";
        case ErrorCode::NonPositivePotential: return "NonPositivePotential";
        case ErrorCode::InconsistentDerivative: return "InconsistentDerivative";
        case ErrorCode::MissingEnvelope: return "MissingEnvelope";
        case ErrorCode::HypothesisFailed: return "HypothesisFailed";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ConvergedToKnown: return "ConvergedToKnown";
        case ErrorCode::FoundFewer: return "FoundFewer";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace graphvar
