#pragma once
/// Closed-form geometry of the hyperbolic plane H^2(-a^2): the hyperboloid
/// sheet, the Poincare disk chart, distances, and the explicit constants that
/// appear in the decay estimates.
///
/// Everything here is a pure function of value types.

#include <stdexcept>
#include <vector>

namespace hypflow {

/// Thrown when an input violates a documented precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Curvature parameter a > 0 (sectional curvature -a^2).
struct Curvature {
    double a;
    explicit Curvature(double value);
    operator double() const { return a; }
};

struct HyperboloidPoint {
    double x0, x1, x2;
};

struct ChartPoint {
    double y1, y2;
};

/// Chart points closer than this to the unit circle are rejected.
inline constexpr double kChartEdgeTolerance = 1e-8;

/// Lorentz form <v,w> = -v0 w0 + v1 w1 + v2 w2.
double lorentz(const HyperboloidPoint& v, const HyperboloidPoint& w);

ChartPoint to_chart(const HyperboloidPoint& p, Curvature a);
HyperboloidPoint from_chart(const ChartPoint& y, Curvature a);

/// lambda(y) = 2 / (a (1 - |y|^2)), so that g = lambda^2 times Euclidean.
double conformal_factor(const ChartPoint& y, Curvature a);
/// Same as conformal_factor for a chart radius r.
double conformal_factor_r(double r, Curvature a);

/// Geodesic distance from the origin of a chart point.
double dist_origin(const ChartPoint& y, Curvature a);
/// Geodesic distance from the origin for chart radius r in [0,1).
double rho_of_r(double r, Curvature a);
/// Inverse of rho_of_r.
double ball_radius_in_chart(double R, Curvature a);

/// Geodesic distance between two points of the hyperboloid sheet.
double dist(const HyperboloidPoint& p, const HyperboloidPoint& q, Curvature a);

/// Radius of the geodesic ball whose chart image is D(tanh(a/2)/2).
double r_of_a(Curvature a);
/// Same quantity evaluated as (2/a) atanh(tanh(a/2)/2).
double r_of_a_atanh(Curvature a);

/// Delta rho = a coth(a rho).
double laplacian_of_distance(double rho, Curvature a);

/// Positive root tau_2 of t^2 + (v_inf - a) t - 2 a^2.
double tau2_root(Curvature a, double v_inf);
/// Decay rate delta = tau_2 / 2.
double delta_rate(Curvature a, double v_inf);
/// delta^2 + (v_inf - a) delta - 2 a^2; negative for every delta in (0, tau_2).
double barrier_quadratic(Curvature a, double v_inf, double delta);

struct EstimateConstants {
    double A1, A2, A3;
};
struct EstimateConstantsExtended {
    long double A1, A2, A3;
};

/// Coefficients of the local sup-norm estimate for the Stokes system.
/// A2 overflows double once a exceeds kEstimateOverflowA; use the extended
/// variant or the logarithms beyond that point.
EstimateConstants estimate_constants(Curvature a);
EstimateConstantsExtended estimate_constants_extended(Curvature a);
/// Natural logarithms of (A1, A2, A3); finite for every a > 0.
EstimateConstants log_estimate_constants(Curvature a);

/// Largest a for which estimate_constants stays finite in double.
inline constexpr double kEstimateOverflowA = 177.0;

/// C = (2/a^2) (2 + (18/a^2) (4/(R1-R0))^2).
double poincare_constant(Curvature a, double R0, double R1);

/// A = exp(delta R1) * omega_sup.
double amplitude_A(Curvature a, double delta, double R1, double omega_sup);

/// Bundle of the rate constants for a flow with sup |v|_a = v_inf.
struct RateConstants {
    double delta;
    double A1, A2, A3;
    double A;
};
RateConstants rate_constants(Curvature a, double v_inf, double R1, double omega_sup);

struct TrigIdentityReport {
    int samples = 0;
    double a_min = 0, a_max = 0;
    /// Max relative error of 1 + tanh(a/2) sinh a = cosh a.
    double max_identity_error = 0;
    /// Max relative error of the middle equality
    /// (1+tanh^2(a/2)) sinh^2 a + tanh(a/2) sinh a + 1 = cosh a (1 + 4 sinh^2(a/2)).
    double max_middle_error = 0;
    /// Min of (2 cosh^2 a - lhs) / (2 cosh^2 a), evaluated with 100-digit floats.
    double min_relative_slack = 0;
    /// Same slack evaluated in plain double, for comparison.
    double min_relative_slack_double = 0;
    bool pass = false;
};

/// Sweeps a logarithmically over [a_min, a_max] and checks both relations.
TrigIdentityReport trig_identity_suite(double a_min = 1e-3, double a_max = 1e2, int samples = 501,
                                       double tol = 1e-10);

/// Numerically stable helpers.
double coth_stable(double x);
double atanh_stable(double x);

}  // namespace hypflow
