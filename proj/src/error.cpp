#include "folicurve/error.hpp"

namespace folicurve {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::JetOrderExceeded: return "JetOrderExceeded";
        case ErrorKind::MissingBinding: return "MissingBinding";
        case ErrorKind::IdentityViolation: return "IdentityViolation";
        case ErrorKind::InvalidJet: return "InvalidJet";
        case ErrorKind::InvalidSphere: return "InvalidSphere";
        case ErrorKind::DegenerateNormal: return "DegenerateNormal";
        case ErrorKind::NotOnLeaf: return "NotOnLeaf";
        case ErrorKind::NotSpacelike: return "NotSpacelike";
        case ErrorKind::NullGradient: return "NullGradient";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::VanishingLeadCoefficient: return "VanishingLeadCoefficient";
        case ErrorKind::StepUnstable: return "StepUnstable";
        case ErrorKind::ValidationFailed: return "ValidationFailed";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::DomainError: return "DomainError";
    }
    return "Unknown";
}

bool is_geometric(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DegenerateNormal:
        case ErrorKind::NotSpacelike:
        case ErrorKind::NullGradient:
        case ErrorKind::VanishingLeadCoefficient:
            return true;
        default:
            return false;
    }
}

}  // namespace folicurve
