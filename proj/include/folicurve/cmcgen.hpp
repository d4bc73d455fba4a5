#pragma once

// Rotationally symmetric CMC profiles: leaves whose hyperbolic center K is
// constant, so k = sqrt(K^2 + r^2) and rr' = kk'. On such leaves the cubic
// c3 X^3 + c2 X^2 + c1 X collapses to c3 X^3 and the mean curvature equation
// becomes a second-order ODE for r(t).

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "folicurve/geometry.hpp"
#include "folicurve/symcore.hpp"
#include "folicurve/types.hpp"

namespace folicurve::cmcgen {

/// c2 after imposing kk' = rr' and its derivative kk'' = r'^2 + rr'' - k'^2.
/// Zero for every valid c2.
sym::SymExpr c2_rotational_residual(const sym::SymExpr& c2);

/// The ODE r'' = F(r, r') for one signature, obtained from the X^3
/// coefficient of -nH S^3 by multiplying by KAP and eliminating KAP KAP2:
///   KAP c3 = lead * RHO2 + rest.
class ProfileOde {
public:
    /// Builds the ODE and runs the startup checks (c2 vanishing for both the
    /// derived and reference brackets; for the Riemannian product, derived c3
    /// equals the reference c3). Throws Error(IdentityViolation) on failure.
    explicit ProfileOde(Signature sig);

    Signature signature() const noexcept { return sig_; }
    const sym::SymExpr& lead() const noexcept { return lead_; }
    const sym::SymExpr& rest() const noexcept { return rest_; }

    /// eps r^2 + k'^2; must be positive (always for Riemannian).
    static double admissibility(double r, double r1, double K, Signature sig);

    double rhs(double r, double r1, double K, double H, int n, int sign_branch) const;

private:
    Signature sig_;
    sym::SymExpr lead_;
    sym::SymExpr rest_;
};

/// Process-wide ODE for `sig`, built on first use.
const ProfileOde& profile_ode(Signature sig);

/// r'' solving sign_branch * n H (eps r^2 + k'^2)^{3/2} = c3 with
/// k = sqrt(K^2 + r^2), k' = r r'/k. The equation only sees sign_branch * H;
/// geometry::mean_curvature_at measures -sign_branch * H on the result (its
/// orientation gives round cylinders negative curvature). sign_branch = +1
/// with H > 0 is the bounded, unduloid-like family.
/// Throws NotSpacelike when the admissibility factor is <= 0 and
/// VanishingLeadCoefficient when r <= 0.
double cmc_rhs(double r, double r1, double K, double H, int n, Signature sig, int sign_branch);

struct ProfileRow {
    double t = 0.0;
    double r = 0.0, r1 = 0.0, r2 = 0.0;
    double k = 0.0, k1 = 0.0, k2 = 0.0;
    double K_check = 0.0;  // sqrt(k^2 - r^2)
};

enum class HaltReason { None, RadiusFloor, Inadmissible };

std::string_view to_string(HaltReason reason) noexcept;

struct RotationalProfile {
    double K = 0.0;
    double H_target = 0.0;
    int n = 0;
    Signature sig = Signature::Riemannian;
    int sign_branch = 1;
    double step = 0.0;
    std::vector<ProfileRow> rows;
    HaltReason halt = HaltReason::None;
    std::string halt_detail;

    /// Mean curvature geometry::mean_curvature_at should report on this profile.
    double oriented_H() const noexcept { return H_target == 0.0 ? 0.0 : -sign_branch * H_target; }

    /// Columns: t,r,r1,k,k1,K_check
    std::string to_csv() const;
    nlohmann::json to_json() const;

    /// Piecewise quintic Hermite interpolation of (r, r', r'') and (k, k', k'')
    /// between stored rows.
    geometry::ProfileCurves curves() const;
};

struct IntegrationOptions {
    double r_min = 1e-6;
    /// Step-doubling local error bound per step.
    double local_error_limit = 1e-8;
};

/// Classical RK4 for (r, r') from t_range.start to t_range.end. Halts early,
/// returning the rows computed so far, when r drops to r_min or the leaf
/// stops being admissible. Throws StepUnstable when one full step and two
/// half steps disagree by more than local_error_limit.
RotationalProfile integrate_profile(double r0, double r1_0, Interval t_range, double step, double K,
                                    double H, int n, Signature sig, int sign_branch,
                                    IntegrationOptions options = {});

struct ValidationOptions {
    double tolerance = 1e-5;
    double dKdt_tolerance = 1e-8;
    int points_per_leaf = 8;
};

/// Closed loop: scans every stored row plus `samples` interpolated leaves
/// at segment midpoints spread over the profile with geometry::constancy_scan_at and checks
/// |H - oriented_H()| and |dK/dt|. Throws ValidationFailed naming the leaf.
geometry::ScanReport validate_profile(const RotationalProfile& profile, int samples,
                                      ValidationOptions options = {});

/// Triangulated surface for n = 2: each leaf circle swept in (x_1, x_2) at
/// height t, vertices (x_1, x_2, t). Standard OFF text.
std::string export_off(const RotationalProfile& profile, int segments = 48);

}  // namespace folicurve::cmcgen
