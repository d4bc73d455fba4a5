#include "folicurve/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "folicurve/error.hpp"
#include "folicurve/identity.hpp"

namespace folicurve::geometry {

namespace {

const sym::SymExpr& neg_nH_S3_cached(Signature sig) {
    static const sym::SymExpr riemannian = identity::neg_nH_S3(Signature::Riemannian);
    static const sym::SymExpr lorentzian = identity::neg_nH_S3(Signature::Lorentzian);
    return sig == Signature::Riemannian ? riemannian : lorentzian;
}

void check_jet(const FoliationJet& jet) {
    if (!(jet.r > 0.0) || !(jet.k > jet.r)) {
        throw Error(ErrorKind::InvalidJet, "leaf needs k > r > 0 (k=" + std::to_string(jet.k) +
                                               ", r=" + std::to_string(jet.r) + ")");
    }
}

void check_point(const SurfacePoint& p, int n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "dimension n must be >= 2");
    if (p.dimension() != n) {
        throw Error(ErrorKind::InvalidArgument, "point has " + std::to_string(p.dimension()) +
                                                    " spatial coordinates, expected " +
                                                    std::to_string(n));
    }
    if (!(p.x_n() > 0.0)) throw Error(ErrorKind::InvalidArgument, "x_n must be positive");
}

void check_on_leaf(const SurfacePoint& p, const FoliationJet& jet) {
    const double dn = p.x_n() - jet.k;
    const double defect = p.tangential_sq() + dn * dn - jet.r * jet.r;
    if (std::abs(defect) > kLeafTolerance * std::max(1.0, jet.r * jet.r)) {
        throw Error(ErrorKind::NotOnLeaf, "leaf equation defect " + std::to_string(defect));
    }
}

}  // namespace

HyperbolicCenter euclidean_to_hyperbolic(double k, double r) {
    if (!(r > 0.0) || !(k > r)) {
        throw Error(ErrorKind::InvalidSphere, "Euclidean sphere needs k > r > 0");
    }
    return {std::sqrt((k - r) * (k + r)), 0.5 * std::log((k + r) / (k - r))};
}

EuclideanSphere hyperbolic_to_euclidean(const HyperbolicCenter& c) {
    if (!(c.K > 0.0) || !(c.R > 0.0)) {
        throw Error(ErrorKind::InvalidSphere, "hyperbolic sphere needs K > 0 and R > 0");
    }
    return {c.K * std::cosh(c.R), c.K * std::sinh(c.R)};
}

double SurfacePoint::tangential_sq() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += x[i] * x[i];
    return s;
}

FoliationJet ProfileCurves::jet(double t) const {
    return FoliationJet{t, k(t), k1(t), k2(t), r(t), r1(t), r2(t)};
}

ProfileCurves constant_profile(double k, double r) {
    auto constant = [](double v) { return [v](double) { return v; }; };
    return {constant(k), constant(0.0), constant(0.0), constant(r), constant(0.0), constant(0.0)};
}

double quarter_norm_sq(double x_n, const FoliationJet& jet, Signature sig) noexcept {
    const double A = (x_n - jet.k) * jet.k1 + jet.r * jet.r1;
    return epsilon(sig) * x_n * x_n * jet.r * jet.r + A * A;
}

double dK_dt(const FoliationJet& jet) {
    check_jet(jet);
    return (jet.k * jet.k1 - jet.r * jet.r1) / std::sqrt((jet.k - jet.r) * (jet.k + jet.r));
}

double mean_curvature_at(const SurfacePoint& p, const FoliationJet& jet, int n, Signature sig) {
    check_point(p, n);
    check_jet(jet);
    check_on_leaf(p, jet);

    const double s2 = quarter_norm_sq(p.x_n(), jet, sig);
    if (std::abs(s2) <= kDegeneracyTolerance) {
        throw Error(ErrorKind::DegenerateNormal, "S^2 = " + std::to_string(s2));
    }
    if (s2 < 0.0) {
        throw Error(ErrorKind::NotSpacelike, "grad f is not timelike (S^2 = " + std::to_string(s2) + ")");
    }
    const double value = sym::eval_numeric(neg_nH_S3_cached(sig), identity::jet_bindings(jet, n, p.x_n()));
    return -value / (n * s2 * std::sqrt(s2));
}

namespace {

// One central-difference divergence evaluation at step h. Arithmetic is in
// long double; the profile itself is only sampled in double.
long double fd_divergence(const std::vector<double>& y0, const ProfileCurves& profile, int n,
                          Signature sig, long double h) {
    using real = long double;
    const int dim = n + 1;  // x_1..x_n, t
    const int xn = n - 1;
    const int tt = n;
    const real eps = epsilon(sig);

    auto f = [&](const std::vector<real>& y) {
        real s = 0.0L;
        for (int i = 0; i < xn; ++i) s += y[i] * y[i];
        const real kt = profile.k(static_cast<double>(y[tt]));
        const real rt = profile.r(static_cast<double>(y[tt]));
        return s + (y[xn] - kt) * (y[xn] - kt) - rt * rt;
    };

    // sqrt|g| (grad f)^j / |grad f| at y.
    auto weighted_field = [&](std::vector<real> y, int j) {
        std::vector<real> grad(dim);
        for (int c = 0; c < dim; ++c) {
            const real keep = y[c];
            y[c] = keep + h;
            const real fp = f(y);
            y[c] = keep - h;
            const real fm = f(y);
            y[c] = keep;
            grad[c] = (fp - fm) / (2.0L * h);
        }
        const real x2 = y[xn] * y[xn];
        real inner = 0.0L;  // <grad f, grad f>
        for (int c = 0; c < xn + 1; ++c) inner += x2 * grad[c] * grad[c];
        inner += eps * grad[tt] * grad[tt];
        const real norm_sq = eps * inner;
        if (norm_sq <= kDegeneracyTolerance) {
            throw Error(sig == Signature::Lorentzian ? ErrorKind::NotSpacelike
                                                     : ErrorKind::DegenerateNormal,
                        "finite-difference gradient is not admissible");
        }
        const real contravariant = (j == tt ? eps : x2) * grad[j];
        return std::pow(y[xn], static_cast<real>(-n)) * contravariant / std::sqrt(norm_sq);
    };

    real div = 0.0L;
    std::vector<real> y(y0.begin(), y0.end());
    for (int j = 0; j < dim; ++j) {
        const real keep = y[j];
        y[j] = keep + h;
        const real vp = weighted_field(y, j);
        y[j] = keep - h;
        const real vm = weighted_field(y, j);
        y[j] = keep;
        div += (vp - vm) / (2.0L * h);
    }
    return div / std::pow(y[xn], static_cast<real>(-n));
}

}  // namespace

double mean_curvature_fd(const SurfacePoint& p, const ProfileCurves& profile, int n, Signature sig,
                         double h, double tolerance) {
    check_point(p, n);
    if (!(h >= 1e-6 && h <= 1e-2)) {
        throw Error(ErrorKind::InvalidArgument, "finite-difference step must lie in [1e-6, 1e-2]");
    }
    if (!(p.x_n() - 2.0 * h > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "point too close to x_n = 0 for step h");
    }
    std::vector<double> y = p.x;
    y.push_back(p.t);
    const long double base = fd_divergence(y, profile, n, sig, h);
    const long double doubled = fd_divergence(y, profile, n, sig, 2.0L * h);
    // For a second-order scheme D(2h) - D(h) ~ 3 C h^2.
    const double estimate = static_cast<double>(std::abs(doubled - base) / 3.0L) / n;
    if (estimate > tolerance) {
        throw Error(ErrorKind::StepTooLarge, "truncation estimate " + std::to_string(estimate) +
                                                 " exceeds tolerance " + std::to_string(tolerance));
    }
    return static_cast<double>(-base / n);
}

bool is_spacelike(const SurfacePoint& p, const FoliationJet& jet) {
    check_jet(jet);
    check_on_leaf(p, jet);
    const double s2 = quarter_norm_sq(p.x_n(), jet, Signature::Lorentzian);
    if (std::abs(s2) <= kDegeneracyTolerance) {
        throw Error(ErrorKind::NullGradient, "grad f is null (S^2 = " + std::to_string(s2) + ")");
    }
    return s2 > 0.0;
}

std::vector<SurfacePoint> leaf_points(const FoliationJet& jet, int n, int count) {
    check_jet(jet);
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "dimension n must be >= 2");
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one point per leaf");
    constexpr double golden = 0.61803398874989484820;
    std::vector<SurfacePoint> points;
    points.reserve(count);
    for (int j = 0; j < count; ++j) {
        const double theta = std::numbers::pi * (j + 0.5) / count;
        const double phi = 2.0 * std::numbers::pi * std::fmod(j * golden, 1.0);
        SurfacePoint p;
        p.t = jet.t;
        p.x.assign(n, 0.0);
        const double rho = jet.r * std::sin(theta);
        if (n == 2) {
            p.x[0] = (j % 2 == 0) ? rho : -rho;
        } else {
            p.x[0] = rho * std::cos(phi);
            p.x[1] = rho * std::sin(phi);
        }
        p.x[n - 1] = jet.k + jet.r * std::cos(theta);
        points.push_back(std::move(p));
    }
    return points;
}

bool ScanReport::is_cmc(double tolerance) const noexcept {
    return rejected_points == 0 && !rows.empty() && max_deviation <= tolerance;
}

nlohmann::json ScanReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"t", r.t},
                             {"x_n", r.x_n},
                             {"H", std::isfinite(r.H) ? nlohmann::json(r.H) : nlohmann::json()},
                             {"dKdt", r.dKdt},
                             {"spacelike", r.spacelike}});
    }
    auto number_or_null = [](double v) {
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
    };
    return {{"signature", std::string(to_string(signature))},
            {"n", n},
            {"leaves", leaves},
            {"points_per_leaf", points_per_leaf},
            {"mean_H", number_or_null(mean_H)},
            {"max_deviation", number_or_null(max_deviation)},
            {"max_abs_H", number_or_null(max_abs_H)},
            {"max_abs_dKdt", max_abs_dKdt},
            {"spacelike_fraction", spacelike_fraction},
            {"rejected_points", rejected_points},
            {"rows", std::move(rows_json)}};
}

std::string ScanReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,x_n,H,dKdt,spacelike\n";
    for (const auto& r : rows) {
        os << r.t << ',' << r.x_n << ',';
        if (std::isfinite(r.H)) {
            os << r.H;
        } else {
            os << "nan";
        }
        os << ',' << r.dKdt << ',' << (r.spacelike ? 1 : 0) << '\n';
    }
    return os.str();
}

ScanReport constancy_scan_at(const ProfileCurves& profile, const std::vector<double>& heights, int n,
                             Signature sig, ScanOptions options) {
    ScanReport report;
    report.signature = sig;
    report.n = n;
    report.leaves = static_cast<int>(heights.size());
    report.points_per_leaf = options.points_per_leaf;

    int spacelike_count = 0;
    double sum_H = 0.0;
    int accepted = 0;
    for (double t : heights) {
        const FoliationJet jet = profile.jet(t);
        const double drift_rate = dK_dt(jet);
        report.max_abs_dKdt = std::max(report.max_abs_dKdt, std::abs(drift_rate));
        for (const auto& p : leaf_points(jet, n, options.points_per_leaf)) {
            ScanRow row{t, p.x_n(), std::numeric_limits<double>::quiet_NaN(), drift_rate, true};
            if (sig == Signature::Lorentzian) {
                row.spacelike = quarter_norm_sq(p.x_n(), jet, sig) > kDegeneracyTolerance;
            }
            try {
                row.H = mean_curvature_at(p, jet, n, sig);
                sum_H += row.H;
                ++accepted;
            } catch (const Error& e) {
                if (!is_geometric(e.kind())) throw;
                ++report.rejected_points;
            }
            if (row.spacelike) ++spacelike_count;
            report.rows.push_back(row);
        }
    }

    const auto total = static_cast<double>(report.rows.size());
    report.spacelike_fraction = total > 0 ? spacelike_count / total : 0.0;
    if (accepted == 0) {
        report.mean_H = report.max_deviation = report.max_abs_H =
            std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    report.mean_H = sum_H / accepted;
    for (const auto& r : report.rows) {
        if (!std::isfinite(r.H)) continue;
        report.max_deviation = std::max(report.max_deviation, std::abs(r.H - report.mean_H));
        report.max_abs_H = std::max(report.max_abs_H, std::abs(r.H));
    }
    return report;
}

ScanReport constancy_scan(const ProfileCurves& profile, Interval t_range, int n, Signature sig,
                          int samples, ScanOptions options) {
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one leaf sample");
    std::vector<double> heights;
    heights.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double s = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        heights.push_back(t_range.start + s * t_range.length());
    }
    return constancy_scan_at(profile, heights, n, sig, options);
}

}  // namespace folicurve::geometry
