#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace divcurve {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
    InvalidInput,          // malformed or out-of-domain argument
    InvalidUniverse,       // universe fails validation
    DimensionMismatch,
    NotPositiveDefinite,
    InsufficientData,
    DegenerateSample,
    DegenerateD,           // D = AC - B^2 effectively zero
    DegenerateSharpe,      // C mu_f^2 - 2 B mu_f + A <= 0
    TangentUndefined,      // mu_f at the minimum-variance return B/C
    NonPositiveGamma,
    VarianceBelowMinimum,
    BoundarySingularity,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// True for the kinds that signal a mathematical degeneracy of valid input
/// rather than bad input.
constexpr bool is_degeneracy(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DegenerateD:
    case ErrorKind::DegenerateSharpe:
    case ErrorKind::TangentUndefined:
        return true;
    default:
        return false;
    }
}

}  // namespace divcurve
