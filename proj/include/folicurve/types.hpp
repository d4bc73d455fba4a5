#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace folicurve {

/// Product metric selector: ds^2 + eps dt^2 on H^n x R.
enum class Signature { Riemannian, Lorentzian };

constexpr int epsilon(Signature sig) noexcept { return sig == Signature::Riemannian ? 1 : -1; }
std::string_view to_string(Signature sig) noexcept;
std::optional<Signature> parse_signature(std::string_view text) noexcept;

/// 2-jet of the Euclidean center height k(t) and radius r(t) of the leaf at height t.
struct FoliationJet {
    double t = 0.0;
    double k = 0.0, k1 = 0.0, k2 = 0.0;
    double r = 0.0, r1 = 0.0, r2 = 0.0;

    /// rr' - kk', which vanishes exactly when the hyperbolic center is stationary.
    double center_drift() const noexcept { return r * r1 - k * k1; }
};

/// Closed parameter range traversed from `start` to `end` (end may be below start).
struct Interval {
    double start = 0.0;
    double end = 0.0;

    double length() const noexcept { return end - start; }
};

}  // namespace folicurve
