#pragma once

// Mean curvature of the sphere-foliated level set
//   f = SIG + (X - KAP)^2 - RHO^2
// in H^n x R with metric (dx_1^2 + ... + dx_n^2)/x_n^2 + eps dt^2, computed
// symbolically from the gradient and divergence, plus the squared cubic
// identities it must satisfy.

#include <nlohmann/json.hpp>

#include <string>

#include "folicurve/symcore.hpp"
#include "folicurve/types.hpp"

namespace folicurve::identity {

using sym::SymExpr;

/// Contravariant gradient of f. The tangential slots all have the form
/// tangential_block * x_i (i < n), so only the common factor is stored.
struct GradientVector {
    SymExpr tangential_block;
    SymExpr normal_component;
    SymExpr vertical_component;
};

/// A = (X - KAP) KAP1 + RHO RHO1, i.e. -f_t / 2.
SymExpr jet_A();
/// B = KAP1^2 - (X - KAP) KAP2 - RHO1^2 - RHO RHO2, which equals -dA/dt.
SymExpr jet_B();

GradientVector build_gradient(Signature sig);

/// eps * <grad f, grad f> before the leaf equation is applied:
/// Riemannian |grad f|^2, Lorentzian -<grad f, grad f>.
SymExpr gradient_norm_sq(Signature sig);

/// S^2 = gradient_norm_sq / 4 reduced on the leaf: eps X^2 RHO^2 + A^2.
SymExpr quarter_norm_reduced(Signature sig);

/// The polynomial -nH S^3 (SIG eliminated), orientation N = -grad f/|grad f|.
SymExpr neg_nH_S3(Signature sig);

/// Closed form 2A^2X^2 + (n-1)k r^2 X^3 + (n-2)k X A^2 + r^2 X^2 B - 2X^3 k'A + 2k k' X^2 A,
/// assembled from A and B (Riemannian).
SymExpr neg_nH_S3_closed_form();

struct CubicCoefficients {
    SymExpr c3, c2, c1;

    /// c3 X^3 + c2 X^2 + c1 X
    SymExpr cubic() const;
};

/// Test hook: perturb one reference coefficient to exercise failure paths.
enum class BracketMutation { None, C3, C2, C1 };

/// Bracket coefficients of the reference identity for each signature.
CubicCoefficients bracket_cubic(Signature sig, BracketMutation mutation = BracketMutation::None);

/// X^3, X^2, X coefficients of neg_nH_S3(sig).
CubicCoefficients derived_cubic(Signature sig);

struct VerificationReport {
    Signature signature = Signature::Riemannian;
    bool pass = false;
    /// s with P = s Q, 0 when neither sign works.
    int sign = 0;
    SymExpr residual;
    double elapsed_ms = 0.0;

    nlohmann::json to_json() const;
};

/// Checks P^2 - Q^2 == 0 exactly over Q[nu] with P = neg_nH_S3(sig) and Q the
/// reference bracket cubic.
VerificationReport verify_squared_identity(Signature sig,
                                           BracketMutation mutation = BracketMutation::None);

/// Throws Error(IdentityViolation) with the residual when the report failed.
void require_pass(const VerificationReport& report);

struct TheoremResiduals {
    /// n^2 H^2 (rr' - kk')^6
    double deg0 = 0.0;
    /// k (n - 2) (rr' - kk')^2
    double c1_val = 0.0;
};

/// Throws Error(InvalidJet) unless k > r > 0, Error(InvalidArgument) unless n >= 2.
TheoremResiduals theorem_residuals(const FoliationJet& jet, double H, int n, Signature sig);

/// Bindings for every jet symbol plus NU = n and X = x_n.
sym::Bindings jet_bindings(const FoliationJet& jet, int n, double x_n);

}  // namespace folicurve::identity
