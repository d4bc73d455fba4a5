#include "folicurve/identity.hpp"

#include <chrono>
#include <cmath>

#include "folicurve/error.hpp"

namespace folicurve::identity {

using namespace sym::vars;
using sym::Var;

SymExpr jet_A() { return (X() - KAP()) * KAP1() + RHO() * RHO1(); }

SymExpr jet_B() {
    return KAP1() * KAP1() - (X() - KAP()) * KAP2() - RHO1() * RHO1() - RHO() * RHO2();
}

GradientVector build_gradient(Signature sig) {
    // Coordinate partials of f: 2 x_i, 2 (X - KAP), -2A. The inverse metric
    // scales spatial slots by X^2 and the t slot by eps.
    const SymExpr inv_spatial = X() * X();
    const SymExpr inv_vertical(static_cast<long>(epsilon(sig)));
    GradientVector g;
    g.tangential_block = inv_spatial * SymExpr(2L);
    g.normal_component = inv_spatial * (SymExpr(2L) * (X() - KAP()));
    g.vertical_component = inv_vertical * (SymExpr(-2L) * jet_A());
    return g;
}

SymExpr gradient_norm_sq(Signature sig) {
    // <G, G> = X^-2 (T^2 SIG + G_n^2) + eps G_t^2.
    const GradientVector g = build_gradient(sig);
    const SymExpr inv_x2 = SymExpr::var(Var::X, -2);
    const SymExpr eps(static_cast<long>(epsilon(sig)));
    const SymExpr spatial = g.tangential_block * g.tangential_block * SIG() +
                            g.normal_component * g.normal_component;
    const SymExpr inner = inv_x2 * spatial + eps * g.vertical_component * g.vertical_component;
    return eps * inner;
}

SymExpr quarter_norm_reduced(Signature sig) {
    return sym::reduce_level_set(gradient_norm_sq(sig) * SymExpr::rational(1, 4));
}

SymExpr neg_nH_S3(Signature sig) {
    // div(W/S) with W = grad f / 2, S^2 = (eps <grad f, grad f>) / 4, written
    // over S^3 using d_j S = d_j(S^2) / (2S):
    //   S^3 div(W/S) = sum_j [S^2 d_j W^j - W^j d_j(S^2) / 2] + S^2 (d_X log sqrt|g|) W^X
    const GradientVector g = build_gradient(sig);
    const SymExpr half = SymExpr::rational(1, 2);
    const SymExpr tang = g.tangential_block * half;  // W^i = tang * x_i
    const SymExpr wn = g.normal_component * half;
    const SymExpr wt = g.vertical_component * half;
    const SymExpr s2 = gradient_norm_sq(sig) * SymExpr::rational(1, 4);

    // Tangential block: d_i W^i = tang for each of the nu - 1 slots, and since
    // S^2 depends on x_i only through SIG, sum_i W^i d_i S^2 = 2 tang SIG dS^2/dSIG.
    const SymExpr tangential =
        (NU() - SymExpr(1L)) * tang * s2 - tang * SIG() * sym::partial(s2, Var::SIG);

    const SymExpr normal = s2 * sym::d_dX(wn) - half * wn * sym::d_dX(s2);
    const SymExpr vertical = s2 * sym::d_dt(wt) - half * wt * sym::d_dt(s2);

    // sqrt|g| = X^-n, so d_X log sqrt|g| = X^n (-n X^{-n-1}) = -n X^-1.
    const SymExpr volume = -NU() * SymExpr::var(Var::X, -1) * wn * s2;

    return sym::reduce_level_set(tangential + normal + vertical + volume);
}

SymExpr neg_nH_S3_closed_form() {
    const SymExpr A = jet_A();
    const SymExpr B = jet_B();
    const SymExpr one(1L);
    const SymExpr two(2L);
    const SymExpr X2 = X() * X();
    const SymExpr X3 = X2 * X();
    return two * A * A * X2 + (NU() - one) * KAP() * RHO() * RHO() * X3 +
           (NU() - two) * KAP() * X() * A * A + RHO() * RHO() * X2 * B -
           two * X3 * KAP1() * A + two * KAP() * KAP1() * X2 * A;
}

SymExpr CubicCoefficients::cubic() const {
    const SymExpr X2 = X() * X();
    return c3 * X2 * X() + c2 * X2 + c1 * X();
}

CubicCoefficients bracket_cubic(Signature sig, BracketMutation mutation) {
    const SymExpr one(1L), two(2L), three(3L);
    const SymExpr k = KAP(), k1 = KAP1(), k2 = KAP2();
    const SymExpr r = RHO(), r1 = RHO1(), r2 = RHO2();
    const SymExpr n = NU();
    const SymExpr drift = r * r1 - k * k1;
    const SymExpr shared_c2_head = (k1 * k1 + r1 * r1 - r * r2 + k * k2) * r * r;

    // (n-1) in the k r^2 term of c3; the C3 mutation swaps it for (n-2).
    const SymExpr c3_dim = mutation == BracketMutation::C3 ? n - two : n - one;

    CubicCoefficients c;
    if (sig == Signature::Riemannian) {
        c.c3 = two * r * r1 * k1 + (n - two) * k * k1 * k1 + c3_dim * k * r * r - r * r * k2;
        c.c2 = shared_c2_head + two * (n - three) * k * k1 * r * r1 -
               two * (n - two) * k1 * k1 * k * k;
        c.c1 = k * (n - two) * drift * drift;
    } else {
        c.c3 = two * r * r1 * k1 - (n - two) * k * k1 * k1 - c3_dim * k * r * r + r * r * k2;
        c.c2 = shared_c2_head - two * (n - one) * k * k1 * r * r1 +
               two * (n - two) * k1 * k1 * k * k;
        c.c1 = -(k * (n - two) * drift * drift);
    }
    if (mutation == BracketMutation::C2) c.c2 += k * k1 * r * r1;
    if (mutation == BracketMutation::C1) c.c1 += k * drift * drift;
    return c;
}

CubicCoefficients derived_cubic(Signature sig) {
    const SymExpr p = neg_nH_S3(sig);
    return {sym::coeff_of_X(p, 3), sym::coeff_of_X(p, 2), sym::coeff_of_X(p, 1)};
}

nlohmann::json VerificationReport::to_json() const {
    return nlohmann::json{
        {"signature", std::string(to_string(signature))},
        {"pass", pass},
        {"sign", sign},
        {"residual_text", residual.to_string()},
        {"elapsed_ms", elapsed_ms},
    };
}

VerificationReport verify_squared_identity(Signature sig, BracketMutation mutation) {
    const auto start = std::chrono::steady_clock::now();
    const SymExpr p = neg_nH_S3(sig);
    const SymExpr q = bracket_cubic(sig, mutation).cubic();

    VerificationReport report;
    report.signature = sig;
    report.residual = p * p - q * q;
    report.pass = report.residual.is_zero();
    if ((p - q).is_zero()) {
        report.sign = 1;
    } else if ((p + q).is_zero()) {
        report.sign = -1;
    }
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

void require_pass(const VerificationReport& report) {
    if (!report.pass) {
        throw Error(ErrorKind::IdentityViolation, std::string(to_string(report.signature)) +
                                                      " residual: " + report.residual.to_string());
    }
}

TheoremResiduals theorem_residuals(const FoliationJet& jet, double H, int n, Signature sig) {
    (void)sig;  // both signatures share the same two closed forms
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "dimension n must be >= 2");
    if (!(jet.r > 0.0) || !(jet.k > jet.r)) {
        throw Error(ErrorKind::InvalidJet, "jet must satisfy k > r > 0");
    }
    const double drift = jet.center_drift();
    const double d2 = drift * drift;
    TheoremResiduals out;
    out.deg0 = static_cast<double>(n) * n * H * H * d2 * d2 * d2;
    out.c1_val = jet.k * (n - 2) * d2;
    return out;
}

sym::Bindings jet_bindings(const FoliationJet& jet, int n, double x_n) {
    return sym::Bindings{{Var::X, x_n},      {Var::KAP, jet.k},   {Var::KAP1, jet.k1},
                         {Var::KAP2, jet.k2}, {Var::RHO, jet.r},   {Var::RHO1, jet.r1},
                         {Var::RHO2, jet.r2}, {Var::NU, static_cast<double>(n)}};
}

}  // namespace folicurve::identity
