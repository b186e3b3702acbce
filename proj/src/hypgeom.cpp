#include "hypflow/hypgeom.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

namespace hypflow {

namespace {

void require_chart_interior(const ChartPoint& y, const char* where) {
    double r = std::hypot(y.y1, y.y2);
    if (!(r < 1.0 - kChartEdgeTolerance))
        throw DomainError(std::string(where) + ": chart point too close to or outside the unit circle");
}

double log_cosh(double x) {
    x = std::fabs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

double log_sinh(double x) {
    if (x < 1.0) return std::log(std::sinh(x));
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

double log_sum_exp(std::initializer_list<double> terms) {
    double m = -std::numeric_limits<double>::infinity();
    for (double t : terms) m = std::max(m, t);
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

template <class T>
void eval_constants(T a, T& A1, T& A2, T& A3) {
    using std::cosh, std::sinh, std::sqrt, std::tanh;
    T t = tanh(a / 2);
    T ch2 = cosh(a / 2);
    T ch = cosh(a);
    T sh = sinh(a);
    T ch2sq = ch2 * ch2;
    A1 = sqrt(t / a) * ch2sq * ch2sq * ch;
    A2 = a * (t * (ch2sq * ch2sq * ch * ch + sh * sh) + 1 / t + sh);
    A3 = ch2sq * (t * sh * (ch2sq * ch + 1) + 1);
}

}  // namespace

Curvature::Curvature(double value) : a(value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("curvature parameter a must be positive and finite");
}

double lorentz(const HyperboloidPoint& v, const HyperboloidPoint& w) {
    return -v.x0 * w.x0 + v.x1 * w.x1 + v.x2 * w.x2;
}

ChartPoint to_chart(const HyperboloidPoint& p, Curvature a) {
    if (!(p.x0 > 0.0)) throw DomainError("to_chart: x0 must be positive");
    double spatial = std::hypot(p.x1, p.x2);
    // (x0 - |x'|)(x0 + |x'|) keeps the invariant check accurate far from the vertex.
    double q = (p.x0 - spatial) * (p.x0 + spatial);
    double target = 1.0 / (a.a * a.a);
    double scale = std::max(target, p.x0 * p.x0);
    if (std::fabs(q - target) > 1e-12 * scale + 1e-12 * target)
        throw DomainError("to_chart: point is not on the hyperboloid sheet");
    double denom = p.x0 + 1.0 / a.a;
    ChartPoint y{p.x1 / denom, p.x2 / denom};
    require_chart_interior(y, "to_chart");
    return y;
}

HyperboloidPoint from_chart(const ChartPoint& y, Curvature a) {
    require_chart_interior(y, "from_chart");
    double r2 = y.y1 * y.y1 + y.y2 * y.y2;
    double w = 2.0 / (a.a * (1.0 - r2));
    return {w - 1.0 / a.a, w * y.y1, w * y.y2};
}

double conformal_factor_r(double r, Curvature a) {
    if (!(r >= 0.0 && r < 1.0 - kChartEdgeTolerance)) throw DomainError("conformal_factor: radius outside chart");
    return 2.0 / (a.a * (1.0 - r) * (1.0 + r));
}

double conformal_factor(const ChartPoint& y, Curvature a) {
    require_chart_interior(y, "conformal_factor");
    return conformal_factor_r(std::hypot(y.y1, y.y2), a);
}

double atanh_stable(double x) {
    // atanh x = 0.5 log1p(2x / (1 - x)), accurate for x near 0 and near 1.
    if (x < 0.0) return -atanh_stable(-x);
    return 0.5 * std::log1p(2.0 * x / (1.0 - x));
}

double coth_stable(double x) {
    if (x == 0.0) throw DomainError("coth: singular at zero");
    if (std::fabs(x) < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

double rho_of_r(double r, Curvature a) {
    if (!(r >= 0.0 && r < 1.0 - kChartEdgeTolerance)) throw DomainError("dist_origin: radius outside chart");
    return 2.0 * atanh_stable(r) / a.a;
}

double dist_origin(const ChartPoint& y, Curvature a) {
    require_chart_interior(y, "dist_origin");
    return rho_of_r(std::hypot(y.y1, y.y2), a);
}

double ball_radius_in_chart(double R, Curvature a) {
    if (!(R >= 0.0)) throw DomainError("ball_radius_in_chart: radius must be nonnegative");
    return std::tanh(0.5 * a.a * R);
}

double dist(const HyperboloidPoint& p, const HyperboloidPoint& q, Curvature a) {
    double c = -a.a * a.a * lorentz(p, q);
    if (c >= 2.0) return std::acosh(c) / a.a;
    // Nearby points: <p-q,p-q> = 2(cosh(a rho) - 1)/a^2 = (4/a^2) sinh^2(a rho/2).
    HyperboloidPoint d{p.x0 - q.x0, p.x1 - q.x1, p.x2 - q.x2};
    double s2 = std::max(0.0, lorentz(d, d));
    return 2.0 * std::asinh(0.5 * a.a * std::sqrt(s2)) / a.a;
}

double r_of_a(Curvature a) {
    // (1/a) log((1 + 3e^a)/(3 + e^a)), rewritten in e^{-a} to avoid overflow and
    // cancellation: the ratio is 1 + (-2 expm1(-a)) / (1 + 3 e^{-a}).
    double em = std::exp(-a.a);
    return std::log1p(-2.0 * std::expm1(-a.a) / (1.0 + 3.0 * em)) / a.a;
}

double r_of_a_atanh(Curvature a) {
    return 2.0 * atanh_stable(0.5 * std::tanh(0.5 * a.a)) / a.a;
}

double laplacian_of_distance(double rho, Curvature a) {
    if (!(rho > 0.0)) throw DomainError("laplacian_of_distance: rho must be positive");
    return a.a * coth_stable(a.a * rho);
}

double tau2_root(Curvature a, double v_inf) {
    if (!(v_inf >= 0.0)) throw DomainError("delta_rate: v_inf must be nonnegative");
    double d = v_inf - a.a;
    double disc = std::sqrt(d * d + 8.0 * a.a * a.a);
    if (d <= 0.0) return 0.5 * (disc - d);
    return 4.0 * a.a * a.a / (disc + d);
}

double delta_rate(Curvature a, double v_inf) {
    return 0.5 * tau2_root(a, v_inf);
}

double barrier_quadratic(Curvature a, double v_inf, double delta) {
    double t2 = tau2_root(a, v_inf);
    double t1 = -2.0 * a.a * a.a / t2;
    return (delta - t2) * (delta - t1);
}

EstimateConstants estimate_constants(Curvature a) {
    EstimateConstants c{};
    eval_constants<double>(a.a, c.A1, c.A2, c.A3);
    return c;
}

EstimateConstantsExtended estimate_constants_extended(Curvature a) {
    EstimateConstantsExtended c{};
    eval_constants<long double>(static_cast<long double>(a.a), c.A1, c.A2, c.A3);
    return c;
}

EstimateConstants log_estimate_constants(Curvature a) {
    double x = a.a;
    double lt = std::log(std::tanh(0.5 * x));
    double lch2 = log_cosh(0.5 * x);
    double lch = log_cosh(x);
    double lsh = log_sinh(x);
    EstimateConstants c{};
    c.A1 = -0.5 * std::log(x) + 0.5 * lt + 4.0 * lch2 + lch;
    c.A2 = std::log(x) + log_sum_exp({lt + 4.0 * lch2 + 2.0 * lch, lt + 2.0 * lsh, -lt, lsh});
    c.A3 = 2.0 * lch2 + log_sum_exp({lt + lsh + log_sum_exp({2.0 * lch2 + lch, 0.0}), 0.0});
    return c;
}

double poincare_constant(Curvature a, double R0, double R1) {
    if (!(R0 > 0.0)) throw DomainError("poincare_constant: R0 must be positive");
    if (!(R1 > R0)) throw DomainError("poincare_constant: requires R1 > R0");
    double a2 = a.a * a.a;
    double k = 4.0 / (R1 - R0);
    return (2.0 / a2) * (2.0 + (18.0 / a2) * k * k);
}

double amplitude_A(Curvature, double delta, double R1, double omega_sup) {
    if (!(delta >= 0.0) || !(R1 > 0.0) || !(omega_sup >= 0.0))
        throw DomainError("amplitude_A: inputs must be nonnegative with R1 > 0");
    return std::exp(delta * R1) * omega_sup;
}

RateConstants rate_constants(Curvature a, double v_inf, double R1, double omega_sup) {
    RateConstants rc{};
    rc.delta = delta_rate(a, v_inf);
    EstimateConstants e = estimate_constants(a);
    rc.A1 = e.A1;
    rc.A2 = e.A2;
    rc.A3 = e.A3;
    rc.A = amplitude_A(a, rc.delta, R1, omega_sup);
    return rc;
}

TrigIdentityReport trig_identity_suite(double a_min, double a_max, int samples, double tol) {
    using mp = boost::multiprecision::cpp_bin_float_100;
    TrigIdentityReport rep;
    rep.samples = samples;
    rep.a_min = a_min;
    rep.a_max = a_max;
    rep.min_relative_slack = std::numeric_limits<double>::infinity();
    rep.min_relative_slack_double = std::numeric_limits<double>::infinity();
    double la = std::log(a_min), lb = std::log(a_max);
    for (int k = 0; k < samples; ++k) {
        double a = samples == 1 ? a_min : std::exp(la + (lb - la) * k / (samples - 1));
        double t = std::tanh(0.5 * a), sh = std::sinh(a), ch = std::cosh(a), sh2 = std::sinh(0.5 * a);
        rep.max_identity_error = std::max(rep.max_identity_error, std::fabs(1.0 + t * sh - ch) / ch);
        double lhs = (1.0 + t * t) * sh * sh + t * sh + 1.0;
        double mid = ch * (1.0 + 4.0 * sh2 * sh2);
        rep.max_middle_error = std::max(rep.max_middle_error, std::fabs(lhs - mid) / mid);
        double rhs = 2.0 * ch * ch;
        rep.min_relative_slack_double = std::min(rep.min_relative_slack_double, (rhs - lhs) / rhs);

        mp A = a;
        mp T = tanh(A / 2), SH = sinh(A), CH = cosh(A);
        mp L = (1 + T * T) * SH * SH + T * SH + 1;
        mp R = 2 * CH * CH;
        rep.min_relative_slack = std::min(rep.min_relative_slack, static_cast<double>((R - L) / R));
    }
    rep.pass = rep.max_identity_error <= tol && rep.max_middle_error <= tol && rep.min_relative_slack > 0.0;
    return rep;
}

}  // namespace hypflow
