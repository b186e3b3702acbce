#include "hypflow/harness.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypflow/snapshot.hpp"

namespace hypflow {

using nlohmann::json;

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::vacuous: return "vacuous";
    }
    return "unknown";
}

json DecayReport::to_json() const {
    return {{"field", field},
            {"status", hypflow::to_string(status)},
            {"fitted_rate", fitted_rate},
            {"theoretical_rate", theoretical_rate},
            {"margin", margin},
            {"fit_window", {fit_lo, fit_hi}},
            {"radii", radii},
            {"sup_values", sup_values},
            {"bound_values", bound_values},
            {"details", details}};
}

std::string DecayReport::to_csv() const {
    std::ostringstream out;
    out << "rho,sup_value,bound_value\n";
    for (std::size_t i = 0; i < radii.size(); ++i) {
        out << format_double(radii[i]) << ',' << format_double(sup_values[i]) << ',';
        if (i < bound_values.size()) out << format_double(bound_values[i]);
        out << '\n';
    }
    return out.str();
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi || !(y[i] > 0.0)) continue;
        double ly = std::log(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// Cutoffs.

namespace {
double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double smoothstep_d(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}
double smoothstep_dd(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}
}  // namespace

double CutoffSpec::phi1(double rho) const {
    double lo = 0.5 * (R0 + R1), w = R1 - lo;
    return smoothstep((rho - lo) / w);
}
double CutoffSpec::dphi1(double rho) const {
    double lo = 0.5 * (R0 + R1), w = R1 - lo;
    return smoothstep_d((rho - lo) / w) / w;
}
double CutoffSpec::d2phi1(double rho) const {
    double lo = 0.5 * (R0 + R1), w = R1 - lo;
    return smoothstep_dd((rho - lo) / w) / (w * w);
}
double CutoffSpec::phi2(double t) { return 1.0 - smoothstep(t - 1.0); }
double CutoffSpec::dphi2(double t) { return -smoothstep_d(t - 1.0); }

bool CutoffSpec::valid(int samples) const {
    if (!(R1 > R0)) return false;
    const double lo = 0.5 * (R0 + R1), bound1 = 4.0 / (R1 - R0);
    for (int q = 0; q < samples; ++q) {
        double rho = R0 + (R1 + 1.0 - R0) * q / (samples - 1);
        double p = phi1(rho);
        if (std::fabs(dphi1(rho)) > bound1 || p < 0.0 || p > 1.0) return false;
        if (rho <= lo && p != 0.0) return false;
        if (rho >= R1 && p != 1.0) return false;
        double t = 3.0 * q / (samples - 1);
        double p2 = phi2(t);
        if (std::fabs(dphi2(t)) > 2.0 || p2 < 0.0 || p2 > 1.0) return false;
        if (t <= 1.0 && p2 != 1.0) return false;
        if (t >= 2.0 && p2 != 0.0) return false;
    }
    return true;
}

double CutoffSpec::h1_constant(double a, int samples) const {
    const double lo = 0.5 * (R0 + R1);
    double lap = 0.0, grad = 0.0;
    for (int q = 0; q < samples; ++q) {
        double rho = lo + (R1 - lo) * q / (samples - 1);
        double d1 = dphi1(rho), d2 = d2phi1(rho);
        lap = std::max(lap, std::fabs(d2 + laplacian_of_distance(rho, Curvature(a)) * d1));
        grad = std::max(grad, std::fabs(d1));
    }
    return lap + grad;
}

// Decay checks.

DecayReport check_velocity_decay(const FlowState& s, const VelocityDecayOptions& opt) {
    const PolarGrid& g = *s.v.grid;
    const double ra = r_of_a(Curvature(s.a));
    ScalarField speed = hyperbolic_norm_form(s.v);
    std::vector<double> ring_max(g.n_r(), 0.0);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) ring_max[i] = std::max(ring_max[i], speed(i, j));

    DecayReport rep;
    rep.field = "velocity";
    for (int i = 0; i < g.n_r(); ++i) {
        double c = g.rho(i);
        if (c - ra < g.rho_in() || c + ra > g.rho_out()) continue;
        double m = 0.0;
        for (int q = 0; q < g.n_r(); ++q)
            if (std::fabs(g.rho(q) - c) <= ra) m = std::max(m, ring_max[q]);
        rep.radii.push_back(c);
        rep.sup_values.push_back(m);
    }
    if (rep.radii.size() < 3) throw DomainError("check_velocity_decay: grid window too small for r(a) balls");

    const auto& v = rep.sup_values;
    std::size_t peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    bool monotone = true;
    for (std::size_t i = peak + 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) monotone = false;
    rep.fit_lo = rep.radii[peak];
    rep.fit_hi = rep.radii.back();
    rep.fitted_rate = -log_slope(rep.radii, v, rep.fit_lo, rep.fit_hi);
    rep.theoretical_rate = 0.0;
    rep.margin = rep.fitted_rate;
    bool dropped = v.back() < opt.reduction * v.front();
    if (v[peak] == 0.0)
        rep.status = CheckStatus::vacuous;
    else
        rep.status = (monotone && dropped) ? CheckStatus::pass : CheckStatus::fail;
    rep.details = {{"ball_radius", ra},
                   {"knee", rep.radii[peak]},
                   {"tail_monotone", monotone},
                   {"final_over_initial", v.front() > 0 ? v.back() / v.front() : 0.0},
                   {"threshold", opt.reduction}};
    return rep;
}

DecayReport check_vorticity_decay(const FlowState& s, double R1, const VorticityDecayOptions& opt) {
    const PolarGrid& g = *s.omega.grid;
    if (!(R1 > g.rho_in()) || !(R1 < g.rho_out())) throw DomainError("check_vorticity_decay: R1 outside the grid");
    const Curvature a(s.a);
    ScalarField speed = hyperbolic_norm_form(s.v);
    double v_inf = sup_on_circle(s.v, R1);
    for (int i = 0; i < g.n_r(); ++i)
        if (g.rho(i) >= R1)
            for (int j = 0; j < g.n_theta(); ++j) v_inf = std::max(v_inf, speed(i, j));
    const double delta = delta_rate(a, v_inf);
    const double omega_R1 = sup_on_circle(s.omega, R1);
    const double A = amplitude_A(a, delta, R1, omega_R1);

    DecayReport rep;
    rep.field = "vorticity";
    long checked = 0, violations = 0;
    double worst = 0.0;
    for (int i = 0; i < g.n_r(); ++i) {
        if (!(g.rho(i) > R1)) continue;
        double bound = A * std::exp(-delta * g.rho(i));
        double m = 0.0;
        for (int j = 0; j < g.n_theta(); ++j) {
            double w = std::fabs(s.omega(i, j));
            m = std::max(m, w);
            ++checked;
            if (w > bound) {
                ++violations;
                worst = std::max(worst, bound > 0 ? w / bound : INFINITY);
            }
        }
        rep.radii.push_back(g.rho(i));
        rep.sup_values.push_back(m);
        rep.bound_values.push_back(bound);
    }
    if (rep.radii.size() < 3) throw DomainError("check_vorticity_decay: window too small for a fit");
    rep.fit_lo = R1;
    rep.fit_hi = R1 + opt.fit_fraction * (g.rho_out() - R1);
    rep.fitted_rate = -log_slope(rep.radii, rep.sup_values, rep.fit_lo, rep.fit_hi);
    rep.theoretical_rate = delta;
    rep.margin = rep.fitted_rate - delta;
    double sup_all = *std::max_element(rep.sup_values.begin(), rep.sup_values.end());
    if (sup_all == 0.0 && omega_R1 == 0.0)
        rep.status = CheckStatus::vacuous;
    else
        rep.status = (violations == 0 && rep.margin >= -opt.rate_tolerance * delta) ? CheckStatus::pass
                                                                                      : CheckStatus::fail;
    rep.details = {{"delta", delta},
                   {"A", A},
                   {"v_inf", v_inf},
                   {"omega_sup_R1", omega_R1},
                   {"R1", R1},
                   {"nodes_checked", checked},
                   {"violations", violations},
                   {"worst_excess", worst}};
    return rep;
}

// Barrier.

json BarrierReport::to_json() const {
    return {{"a", a}, {"v_inf", v_inf}, {"delta", delta}, {"analytic_margin", analytic_margin},
            {"nodal_margin", nodal_margin}, {"pass", pass}};
}

BarrierReport check_barrier(double a, double delta, double v_inf, const PolarGrid& grid) {
    BarrierReport rep;
    rep.a = a;
    rep.v_inf = v_inf;
    rep.delta = delta;
    rep.analytic_margin = -barrier_quadratic(Curvature(a), v_inf, delta);
    // With f = e^{-delta rho}: -L f / f = -delta^2 + delta a coth(a rho) + 2a^2 - delta g(v, d rho),
    // and the advection term is at worst delta v_inf.
    double m = INFINITY;
    for (int i = 0; i < grid.n_r(); ++i) {
        double lap = laplacian_of_distance(grid.rho(i), Curvature(a));
        m = std::min(m, -delta * delta + delta * lap + 2.0 * a * a - delta * v_inf);
    }
    rep.nodal_margin = m;
    rep.pass = rep.analytic_margin > 0.0 && rep.nodal_margin > 0.0;
    return rep;
}

std::vector<BarrierReport> barrier_sweep() {
    std::vector<BarrierReport> out;
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
        GridPtr g = PolarGrid::geodesic(a, 1.0, 1.0 + 8.0 / a, 64, 16);
        for (double v : {0.0, a / 2, a, 2 * a}) out.push_back(check_barrier(a, delta_rate(Curvature(a), v), v, *g));
    }
    return out;
}

// Inequalities.

json InequalityReport::to_json() const {
    return {{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"ratio", ratio}, {"status", hypflow::to_string(status)},
            {"details", details}};
}

namespace {
void settle(InequalityReport& rep) {
    if (rep.lhs < kVacuousLevel && rep.rhs < kVacuousLevel) {
        rep.status = CheckStatus::vacuous;
        rep.ratio = 0.0;
        return;
    }
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : INFINITY;
    rep.status = rep.lhs <= rep.rhs ? CheckStatus::pass : CheckStatus::fail;
}

ScalarField gradient_energy_density(const OneFormField& v) {
    return pointwise_square(hyperbolic_norm_tensor(covariant_gradient(v)));
}
}  // namespace

InequalityReport check_poincare(const OneFormField& v, double a, double R0, double R1) {
    const PolarGrid& g = *v.grid;
    InequalityReport rep;
    rep.name = "poincare";
    double C = poincare_constant(Curvature(a), R0, R1);
    rep.lhs = integrate(pointwise_square(hyperbolic_norm_form(v)), Annulus{R1, g.rho_out()});
    double grad = integrate(gradient_energy_density(v), Annulus{std::max(R0, g.rho_in()), g.rho_out()});
    rep.rhs = C * grad;
    rep.details = {{"C", C}, {"R0", R0}, {"R1", R1}, {"dirichlet", grad}};
    settle(rep);
    return rep;
}

InequalityReport check_h1_vorticity(const FlowState& s, double R0, double R1, const CutoffSpec& cut) {
    const PolarGrid& g = *s.omega.grid;
    if (R1 >= g.rho_out() || R0 < g.rho_in() - 1e-12) throw DomainError("check_h1_vorticity: annulus outside grid");
    InequalityReport rep;
    rep.name = "h1_vorticity";
    std::vector<double> wr = d_rho(s.omega), wt = d_theta(s.omega);
    ScalarField grad_sq(s.omega.grid);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t p = g.idx(i, j);
            grad_sq.values[p] = wr[p] * wr[p] + wt[p] * wt[p] / (g.s(i) * g.s(i));
        }
    rep.lhs = integrate(grad_sq, Annulus{R1, g.rho_out()});
    const double a = s.a, C = cut.h1_constant(a);
    double dirichlet = integrate(gradient_energy_density(s.v), Annulus{R0, g.rho_out()});
    ScalarField speed = hyperbolic_norm_form(s.v);
    ScalarField weight(s.omega.grid);
    for (std::size_t p = 0; p < weight.size(); ++p)
        weight.values[p] = s.omega.values[p] * s.omega.values[p] * (1.0 + speed.values[p]);
    double annulus_term = integrate(weight, Annulus{0.5 * (R0 + R1), R1});
    rep.rhs = 2.0 * a * a * dirichlet + C * annulus_term;
    rep.details = {{"C", C}, {"dirichlet", dirichlet}, {"annulus_term", annulus_term}, {"cutoff_valid", cut.valid()}};
    settle(rep);
    return rep;
}

// Pressure.

json PressureReport::to_json() const {
    return {{"status", hypflow::to_string(status)},
            {"directions", rays.directions},
            {"limits", rays.limits},
            {"targets", targets},
            {"gap", gap},
            {"expected_gap", expected_gap},
            {"worst_ray_error", worst_ray_error},
            {"window", {rays.rho_lo, rays.rho_hi}},
            {"rings_used", rays.rings_used}};
}

PressureReport check_pressure_nonconvergence(const BoundaryTrace& phi, double a, GridPtr grid) {
    if (std::fabs(a - grid->a()) > 1e-14 * a) throw DomainError("check_pressure_nonconvergence: curvature does not match grid");
    PressureReport rep;
    const double spread = phi.max_value() - phi.min_value();
    rep.expected_gap = 2.0 * a * a * spread;
    FlowState st = potential_flow(phi, grid);
    std::vector<double> dirs;
    for (int q = 0; q < 8; ++q) dirs.push_back(2.0 * std::numbers::pi * q / 8);
    double lo = std::max(grid->rho_in(), grid->rho_out() - 3.0 / a);
    rep.rays = pressure_ray_limits(st.P, dirs, lo, grid->rho_out());
    rep.gap = rep.rays.max_gap;
    const double floor = a * a * spread;
    for (std::size_t q = 0; q < dirs.size(); ++q) {
        double target = -2.0 * a * a * phi(dirs[q]);
        rep.targets.push_back(target);
        double tol = 0.05 * std::max(std::fabs(target), floor);
        double err = std::fabs(rep.rays.limits[q] - target);
        rep.worst_ray_error = std::max(rep.worst_ray_error, tol > 0 ? err / tol : (err > 0 ? INFINITY : 0.0));
    }
    if (!phi.nonconstant())
        rep.status = CheckStatus::vacuous;
    else
        rep.status = (rep.gap >= 0.9 * rep.expected_gap && rep.worst_ray_error <= 1.0) ? CheckStatus::pass
                                                                                       : CheckStatus::fail;
    return rep;
}

// Radial oracle.

std::vector<double> radial_vorticity_oracle(double a, double R0, double R_out, const std::vector<double>& rhos) {
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 2>;
    auto rhs = [a](const State& x, State& dx, double rho) {
        dx[0] = x[1];
        dx[1] = 2.0 * a * a * x[0] - laplacian_of_distance(rho, Curvature(a)) * x[1];
    };
    // Integrate inward from the truncation circle, where the decaying solution
    // grows in the direction of integration.
    std::vector<double> times;
    times.push_back(R_out);
    std::vector<std::size_t> order(rhos.size());
    for (std::size_t q = 0; q < rhos.size(); ++q) order[q] = q;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rhos[x] > rhos[y]; });
    for (std::size_t q : order) times.push_back(std::min(rhos[q], R_out));
    times.push_back(R0);
    std::vector<double> values;
    State x{0.0, -1.0};
    auto stepper = ode::make_controlled(1e-14, 1e-13, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), -1e-3,
                         [&](const State& st, double) { values.push_back(st[0]); });
    const double at_wall = values.back();
    std::vector<double> out(rhos.size());
    for (std::size_t q = 0; q < order.size(); ++q) out[order[q]] = values[q + 1] / at_wall;
    return out;
}

}  // namespace hypflow
