#include "folicurve/types.hpp"

namespace folicurve {

std::string_view to_string(Signature sig) noexcept {
    return sig == Signature::Riemannian ? "riemannian" : "lorentzian";
}

std::optional<Signature> parse_signature(std::string_view text) noexcept {
    if (text == "riemannian" || text == "R" || text == "+1") return Signature::Riemannian;
    if (text == "lorentzian" || text == "L" || text == "-1") return Signature::Lorentzian;
    return std::nullopt;
}

}  // namespace folicurve
