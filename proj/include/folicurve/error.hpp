#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace folicurve {

enum class ErrorKind {
    InvalidArgument,
    JetOrderExceeded,
    MissingBinding,
    IdentityViolation,
    InvalidJet,
    InvalidSphere,
    DegenerateNormal,
    NotOnLeaf,
    NotSpacelike,
    NullGradient,
    StepTooLarge,
    VanishingLeadCoefficient,
    StepUnstable,
    ValidationFailed,
    ParseError,
    DomainError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// True for errors that signal the geometry is inadmissible (not a bad input).
bool is_geometric(ErrorKind kind) noexcept;

}  // namespace folicurve
