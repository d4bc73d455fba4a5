#include "folicurve/cmcgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "folicurve/error.hpp"
#include "folicurve/identity.hpp"

namespace folicurve::cmcgen {

using sym::SymExpr;
using sym::Var;
using namespace sym::vars;

namespace {

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

sym::Exponents exps(std::initializer_list<std::pair<Var, int>> powers) {
    sym::Exponents e{};
    for (const auto& [v, p] : powers) e[static_cast<std::size_t>(v)] = p;
    return e;
}

// KAP KAP2 -> r'^2 + r r'' - k'^2, the t-derivative of kk' = rr'.
SymExpr eliminate_second_center_derivative(const SymExpr& p) {
    return sym::rewrite_monomial(p, exps({{Var::KAP, 1}, {Var::KAP2, 1}}),
                                 RHO1() * RHO1() + RHO() * RHO2() - KAP1() * KAP1());
}

}  // namespace

SymExpr c2_rotational_residual(const SymExpr& c2) {
    const SymExpr no_k2 = eliminate_second_center_derivative(c2);
    return sym::rewrite_monomial(no_k2, exps({{Var::KAP, 1}, {Var::KAP1, 1}}), RHO() * RHO1());
}

ProfileOde::ProfileOde(Signature sig) : sig_(sig) {
    const identity::CubicCoefficients derived = identity::derived_cubic(sig);
    const identity::CubicCoefficients reference = identity::bracket_cubic(sig);

    for (const auto* c2 : {&derived.c2, &reference.c2}) {
        const SymExpr residual = c2_rotational_residual(*c2);
        if (!residual.is_zero()) {
            throw Error(ErrorKind::IdentityViolation,
                        "c2 does not vanish on rotational jets: " + residual.to_string());
        }
    }
    if (sig == Signature::Riemannian && !(derived.c3 == reference.c3)) {
        throw Error(ErrorKind::IdentityViolation,
                    "derived c3 disagrees with the reference bracket: " +
                        (derived.c3 - reference.c3).to_string());
    }

    const SymExpr scaled = eliminate_second_center_derivative(KAP() * derived.c3);
    if (scaled.contains(Var::KAP2) || scaled.max_degree(Var::RHO2) > 1) {
        throw Error(ErrorKind::IdentityViolation, "c3 is not linear in the second derivatives");
    }
    lead_ = sym::coeff_of(scaled, Var::RHO2, 1);
    rest_ = sym::coeff_of(scaled, Var::RHO2, 0);
}

double ProfileOde::admissibility(double r, double r1, double K, Signature sig) {
    const double k = std::hypot(K, r);
    const double k1 = r * r1 / k;
    return epsilon(sig) * r * r + k1 * k1;
}

double ProfileOde::rhs(double r, double r1, double K, double H, int n, int sign_branch) const {
    if (!(r > 0.0)) throw Error(ErrorKind::VanishingLeadCoefficient, "r must stay positive");
    const double k = std::hypot(K, r);
    const double k1 = r * r1 / k;
    const double w = admissibility(r, r1, K, sig_);
    if (!(w > 0.0)) {
        throw Error(ErrorKind::NotSpacelike,
                    "admissibility factor eps r^2 + k'^2 = " + format_g(w));
    }
    const sym::Bindings b{{Var::KAP, k},  {Var::KAP1, k1}, {Var::RHO, r},
                          {Var::RHO1, r1}, {Var::NU, static_cast<double>(n)}};
    const double lead = sym::eval_numeric(lead_, b);
    if (std::abs(lead) < 1e-300) {
        throw Error(ErrorKind::VanishingLeadCoefficient, "coefficient of r'' vanished");
    }
    const double target = sign_branch * n * H * w * std::sqrt(w);
    return (k * target - sym::eval_numeric(rest_, b)) / lead;
}

const ProfileOde& profile_ode(Signature sig) {
    static const ProfileOde riemannian(Signature::Riemannian);
    static const ProfileOde lorentzian(Signature::Lorentzian);
    return sig == Signature::Riemannian ? riemannian : lorentzian;
}

double cmc_rhs(double r, double r1, double K, double H, int n, Signature sig, int sign_branch) {
    if (!(K > 0.0)) throw Error(ErrorKind::InvalidArgument, "K must be positive");
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "dimension n must be >= 2");
    if (sign_branch != 1 && sign_branch != -1) {
        throw Error(ErrorKind::InvalidArgument, "sign_branch must be +1 or -1");
    }
    return profile_ode(sig).rhs(r, r1, K, H, n, sign_branch);
}

std::string_view to_string(HaltReason reason) noexcept {
    switch (reason) {
        case HaltReason::None: return "none";
        case HaltReason::RadiusFloor: return "radius_floor";
        case HaltReason::Inadmissible: return "inadmissible";
    }
    return "unknown";
}

namespace {

ProfileRow make_row(double t, double r, double r1, double r2, double K) {
    ProfileRow row;
    row.t = t;
    row.r = r;
    row.r1 = r1;
    row.r2 = r2;
    row.k = std::hypot(K, r);
    row.k1 = r * r1 / row.k;
    row.k2 = (r1 * r1 + r * r2 - row.k1 * row.k1) / row.k;
    row.K_check = std::sqrt((row.k - r) * (row.k + r));
    return row;
}

struct State {
    double r;
    double r1;
};

}  // namespace

RotationalProfile integrate_profile(double r0, double r1_0, Interval t_range, double step, double K,
                                    double H, int n, Signature sig, int sign_branch,
                                    IntegrationOptions options) {
    if (!(r0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "r0 must be positive");
    if (!(K > 0.0)) throw Error(ErrorKind::InvalidArgument, "K must be positive");
    if (!(step > 0.0) || step > 1e-2) {
        throw Error(ErrorKind::InvalidArgument, "step must lie in (0, 1e-2]");
    }
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "dimension n must be >= 2");
    if (sign_branch != 1 && sign_branch != -1) {
        throw Error(ErrorKind::InvalidArgument, "sign_branch must be +1 or -1");
    }
    const ProfileOde& ode = profile_ode(sig);

    RotationalProfile out;
    out.K = K;
    out.H_target = H;
    out.n = n;
    out.sig = sig;
    out.sign_branch = sign_branch;

    const double span = t_range.length();
    const auto steps = static_cast<long>(std::ceil(std::abs(span) / step - 1e-9));
    const double h = steps > 0 ? span / steps : 0.0;
    out.step = std::abs(h);

    auto accel = [&](const State& s) { return ode.rhs(s.r, s.r1, K, H, n, sign_branch); };
    auto rk4 = [&](const State& s, double dt) {
        const double a1 = accel(s);
        const State s2{s.r + 0.5 * dt * s.r1, s.r1 + 0.5 * dt * a1};
        const double a2 = accel(s2);
        const State s3{s.r + 0.5 * dt * s2.r1, s.r1 + 0.5 * dt * a2};
        const double a3 = accel(s3);
        const State s4{s.r + dt * s3.r1, s.r1 + dt * a3};
        const double a4 = accel(s4);
        return State{s.r + dt / 6.0 * (s.r1 + 2.0 * s2.r1 + 2.0 * s3.r1 + s4.r1),
                     s.r1 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)};
    };

    auto halt = [&](HaltReason reason, const std::string& detail) {
        out.halt = reason;
        out.halt_detail = detail;
        return out;
    };

    if (r0 <= options.r_min) {
        return halt(HaltReason::RadiusFloor, "r0 is below r_min");
    }

    State state{r0, r1_0};
    try {
        out.rows.push_back(make_row(t_range.start, state.r, state.r1, accel(state), K));
    } catch (const Error& e) {
        if (!is_geometric(e.kind())) throw;
        return halt(HaltReason::Inadmissible, std::string("at t = ") +
                                                  format_g(t_range.start) + ": " + e.what());
    }

    for (long i = 1; i <= steps; ++i) {
        const double t = t_range.start + static_cast<double>(i) * h;
        State next{};
        double r2 = 0.0;
        try {
            next = rk4(state, h);
            const State half = rk4(rk4(state, 0.5 * h), 0.5 * h);
            const double local = std::max(std::abs(next.r - half.r), std::abs(next.r1 - half.r1));
            if (local > options.local_error_limit) {
                throw Error(ErrorKind::StepUnstable,
                            "local error " + format_g(local) + " at t = " + format_g(t));
            }
            if (next.r <= options.r_min) {
                return halt(HaltReason::RadiusFloor, "r reached r_min near t = " + format_g(t));
            }
            r2 = accel(next);
        } catch (const Error& e) {
            if (!is_geometric(e.kind())) throw;
            return halt(HaltReason::Inadmissible,
                        "admissible interval ends before t = " + format_g(t) + ": " + e.what());
        }
        state = next;
        out.rows.push_back(make_row(t, state.r, state.r1, r2, K));
    }
    return out;
}

std::string RotationalProfile::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,r,r1,k,k1,K_check\n";
    for (const auto& row : rows) {
        os << row.t << ',' << row.r << ',' << row.r1 << ',' << row.k << ',' << row.k1 << ','
           << row.K_check << '\n';
    }
    return os.str();
}

nlohmann::json RotationalProfile::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        rows_json.push_back({{"t", row.t},
                             {"r", row.r},
                             {"r1", row.r1},
                             {"k", row.k},
                             {"k1", row.k1},
                             {"K_check", row.K_check}});
    }
    return {{"K", K},
            {"H", H_target},
            {"n", n},
            {"signature", std::string(folicurve::to_string(sig))},
            {"sign_branch", sign_branch},
            {"step", step},
            {"halt", std::string(to_string(halt))},
            {"halt_detail", halt_detail},
            {"rows", std::move(rows_json)}};
}

namespace {

// Quintic Hermite basis on [0, 1], coefficients of s^0..s^5, for
// p0, h m0, h^2 a0, h^2 a1, h m1, p1.
constexpr std::array<std::array<double, 6>, 6> kQuintic = {{
    {1, 0, 0, -10, 15, -6},
    {0, 1, 0, -6, 8, -3},
    {0, 0, 0.5, -1.5, 1.5, -0.5},
    {0, 0, 0, 0.5, -1, 0.5},
    {0, 0, 0, -4, 7, -3},
    {0, 0, 0, 10, -15, 6},
}};

// d-th derivative in s of a basis polynomial.
double basis(int which, int d, double s) {
    double acc = 0.0;
    for (int p = 5; p >= d; --p) {
        double c = kQuintic[which][p];
        for (int j = 0; j < d; ++j) c *= (p - j);
        acc = acc * s + c;
    }
    return acc;
}

struct Node {
    double t, f, f1, f2;
};

class QuinticTrack {
public:
    explicit QuinticTrack(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    // Derivative of order d in t.
    double eval(double t, int d) const {
        if (nodes_.size() == 1) return d == 0 ? nodes_[0].f : (d == 1 ? nodes_[0].f1 : nodes_[0].f2);
        const std::size_t i = segment(t);
        const Node& a = nodes_[i];
        const Node& b = nodes_[i + 1];
        const double h = b.t - a.t;
        const double s = (t - a.t) / h;
        const std::array<double, 6> w = {a.f, h * a.f1, h * h * a.f2, h * h * b.f2, h * b.f1, b.f};
        double v = 0.0;
        for (int k = 0; k < 6; ++k) v += w[k] * basis(k, d, s);
        return v / std::pow(h, d);
    }

private:
    std::size_t segment(double t) const {
        const bool increasing = nodes_.back().t > nodes_.front().t;
        auto less = [increasing](double a, double b) { return increasing ? a < b : a > b; };
        std::size_t lo = 0, hi = nodes_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (less(t, nodes_[mid].t)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return lo;
    }

    std::vector<Node> nodes_;
};

}  // namespace

geometry::ProfileCurves RotationalProfile::curves() const {
    if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "profile has no rows");
    std::vector<Node> r_nodes, k_nodes;
    for (const auto& row : rows) {
        r_nodes.push_back({row.t, row.r, row.r1, row.r2});
        k_nodes.push_back({row.t, row.k, row.k1, row.k2});
    }
    auto r_track = std::make_shared<QuinticTrack>(std::move(r_nodes));
    auto k_track = std::make_shared<QuinticTrack>(std::move(k_nodes));
    auto fn = [](std::shared_ptr<QuinticTrack> track, int d) {
        return [track = std::move(track), d](double t) { return track->eval(t, d); };
    };
    return {fn(k_track, 0), fn(k_track, 1), fn(k_track, 2),
            fn(r_track, 0), fn(r_track, 1), fn(r_track, 2)};
}

geometry::ScanReport validate_profile(const RotationalProfile& profile, int samples,
                                      ValidationOptions options) {
    if (profile.rows.empty()) {
        throw Error(ErrorKind::InvalidArgument, "cannot validate an empty profile");
    }
    std::vector<double> heights;
    for (const auto& row : profile.rows) heights.push_back(row.t);
    // Extra leaves sit halfway between stored rows, where the interpolant is
    // least constrained.
    const std::size_t segments = profile.rows.size() - 1;
    for (int i = 0; segments > 0 && i < samples; ++i) {
        const auto j = std::min(segments - 1, static_cast<std::size_t>((i + 0.5) * segments / samples));
        heights.push_back(0.5 * (profile.rows[j].t + profile.rows[j + 1].t));
    }

    geometry::ScanOptions scan_options;
    scan_options.points_per_leaf = options.points_per_leaf;
    const geometry::ScanReport report = geometry::constancy_scan_at(
        profile.curves(), heights, profile.n, profile.sig, scan_options);

    const double expected = profile.oriented_H();
    for (const auto& row : report.rows) {
        if (!std::isfinite(row.H)) {
            throw Error(ErrorKind::ValidationFailed,
                        "leaf t = " + format_g(row.t) + " has an inadmissible point");
        }
        if (std::abs(row.H - expected) > options.tolerance) {
            std::ostringstream os;
            os.precision(10);
            os << "leaf t = " << row.t << ": H = " << row.H << ", expected " << expected;
            throw Error(ErrorKind::ValidationFailed, os.str());
        }
        if (std::abs(row.dKdt) > options.dKdt_tolerance) {
            std::ostringstream os;
            os << "leaf t = " << row.t << ": |dK/dt| = " << std::abs(row.dKdt);
            throw Error(ErrorKind::ValidationFailed, os.str());
        }
    }
    return report;
}

std::string export_off(const RotationalProfile& profile, int segments) {
    if (profile.n != 2) {
        throw Error(ErrorKind::InvalidArgument, "OFF export is only defined for n = 2");
    }
    if (segments < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 segments");
    const std::size_t rings = profile.rows.size();
    const std::size_t faces = rings > 1 ? 2 * (rings - 1) * segments : 0;

    std::ostringstream os;
    os.precision(12);
    os << "OFF\n" << rings * segments << ' ' << faces << " 0\n";
    for (const auto& row : profile.rows) {
        for (int j = 0; j < segments; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / segments;
            os << row.r * std::cos(phi) << ' ' << row.k + row.r * std::sin(phi) << ' ' << row.t
               << '\n';
        }
    }
    for (std::size_t i = 0; i + 1 < rings; ++i) {
        for (int j = 0; j < segments; ++j) {
            const std::size_t a = i * segments + j;
            const std::size_t b = i * segments + (j + 1) % segments;
            const std::size_t c = a + segments;
            const std::size_t d = b + segments;
            os << "3 " << a << ' ' << c << ' ' << d << '\n';
            os << "3 " << a << ' ' << d << ' ' << b << '\n';
        }
    }
    return os.str();
}

}  // namespace folicurve::cmcgen
