#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

#include "folicurve/types.hpp"

namespace folicurve::geometry {

inline constexpr double kLeafTolerance = 1e-9;
inline constexpr double kDegeneracyTolerance = 1e-14;

/// Center height and radius of a sphere measured in the hyperbolic metric.
struct HyperbolicCenter {
    double K = 0.0;
    double R = 0.0;
};

struct EuclideanSphere {
    double k = 0.0;
    double r = 0.0;
};

/// K = sqrt(k^2 - r^2), R = log((k + r)/(k - r)) / 2. Throws InvalidSphere unless k > r > 0.
HyperbolicCenter euclidean_to_hyperbolic(double k, double r);
/// k = K cosh R, r = K sinh R. Throws InvalidSphere unless K > 0 and R > 0.
EuclideanSphere hyperbolic_to_euclidean(const HyperbolicCenter& c);

/// A point (x_1, ..., x_n, t) of the product space; n = x.size().
struct SurfacePoint {
    std::vector<double> x;
    double t = 0.0;

    int dimension() const noexcept { return static_cast<int>(x.size()); }
    double x_n() const { return x.back(); }
    double tangential_sq() const noexcept;
};

/// k(t), r(t) and their first two derivatives as callables.
struct ProfileCurves {
    std::function<double(double)> k, k1, k2, r, r1, r2;

    FoliationJet jet(double t) const;
};

/// Profile with constant k and r; a vertical cylinder over a geodesic sphere.
ProfileCurves constant_profile(double k, double r);

/// S^2 = eps x_n^2 r^2 + A^2 with A = (x_n - k) k' + r r'.
double quarter_norm_sq(double x_n, const FoliationJet& jet, Signature sig) noexcept;

/// (k k' - r r') / sqrt(k^2 - r^2), the t-derivative of the hyperbolic center height.
double dK_dt(const FoliationJet& jet);

/// Mean curvature from the symbolic -nH S^3 polynomial, orientation
/// N = -grad f / |grad f| with f increasing away from the leaf center (the
/// cylinder over a sphere then has H = -(n-1) coth(R) / n).
/// Throws NotOnLeaf, DegenerateNormal (|S^2| <= 1e-14), NotSpacelike (Lorentzian S^2 < 0).
double mean_curvature_at(const SurfacePoint& p, const FoliationJet& jet, int n, Signature sig);

/// Independent oracle: central differences of the divergence of
/// grad f / |grad f| built from pointwise values of k(t), r(t) only.
/// A Richardson comparison against step 2h raises StepTooLarge when the
/// estimated truncation error exceeds `tolerance`.
double mean_curvature_fd(const SurfacePoint& p, const ProfileCurves& profile, int n, Signature sig,
                         double h, double tolerance = 1e-6);

/// True iff <grad f, grad f> < 0 on the leaf. Throws NullGradient when |S^2| <= 1e-14.
bool is_spacelike(const SurfacePoint& p, const FoliationJet& jet);

/// Deterministic points on the leaf of `jet`: polar angles from the x_n axis
/// uniformly spaced in (0, pi) and golden-angle azimuths in the tangential
/// coordinates, so each point has a distinct x_n.
std::vector<SurfacePoint> leaf_points(const FoliationJet& jet, int n, int count);

struct ScanRow {
    double t = 0.0;
    double x_n = 0.0;
    double H = 0.0;  // NaN where the point was rejected
    double dKdt = 0.0;
    bool spacelike = true;
};

struct ScanReport {
    Signature signature = Signature::Riemannian;
    int n = 0;
    int leaves = 0;
    int points_per_leaf = 0;
    std::vector<ScanRow> rows;
    double mean_H = 0.0;
    double max_deviation = 0.0;  // max |H - mean_H| over accepted points
    double max_abs_H = 0.0;
    double max_abs_dKdt = 0.0;
    double spacelike_fraction = 1.0;
    int rejected_points = 0;

    bool is_cmc(double tolerance) const noexcept;
    nlohmann::json to_json() const;
    /// Columns: t,x_n,H,dKdt,spacelike
    std::string to_csv() const;
};

struct ScanOptions {
    int points_per_leaf = 8;
};

/// Evaluates H on `samples` leaves evenly spaced over t_range (endpoints
/// included) times `points_per_leaf` points on each leaf. Non-spacelike or
/// degenerate points are recorded with NaN H instead of aborting the scan.
ScanReport constancy_scan(const ProfileCurves& profile, Interval t_range, int n, Signature sig,
                          int samples, ScanOptions options = {});

/// Scan over an explicit list of leaf heights.
ScanReport constancy_scan_at(const ProfileCurves& profile, const std::vector<double>& heights, int n,
                             Signature sig, ScanOptions options = {});

}  // namespace folicurve::geometry
