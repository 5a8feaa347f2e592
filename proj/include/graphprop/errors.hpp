#pragma once

#include <stdexcept>
#include <string>

namespace graphprop {

enum class ErrorKind {
    InvalidArgument,
    ShapeMismatch,
    NonFiniteInput,
    TooFewObserved,
    UnreachableComponent,
    SingularDegree,
    EmptyGraph,
    InfeasibleFraction,
    NoMissingEntries,
    AllMissing,
    Format,
    Io,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception; `kind()` lets callers map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::TooFewObserved: return "TooFewObserved";
    case ErrorKind::UnreachableComponent: return "UnreachableComponent";
    case ErrorKind::SingularDegree: return "SingularDegree";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InfeasibleFraction: return "InfeasibleFraction";
    case ErrorKind::NoMissingEntries: return "NoMissingEntries";
    case ErrorKind::AllMissing: return "AllMissing";
    case ErrorKind::Format: return "Format";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace graphprop
