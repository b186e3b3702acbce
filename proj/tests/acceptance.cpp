// Acceptance run: one PASS/FAIL line per criterion, with the measured values
// and the wall time. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hypflow/harness.hpp"

using namespace hypflow;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome constants() {
    const Curvature one(1.0);
    const double r1 = r_of_a(one), r1b = r_of_a_atanh(one);
    TrigIdentityReport trig = trig_identity_suite(1e-3, 1e2, 501, 1e-10);
    const bool anchor = std::fabs(r1 - 0.470600) <= 1e-6;
    const bool forms = std::fabs(r1 - r1b) <= 1e-12;
    const bool d11 = std::fabs(delta_rate(one, 1.0) - std::sqrt(2.0) / 2) <= 1e-12;
    const bool d10 = std::fabs(delta_rate(one, 0.0) - 1.0) <= 1e-12;
    const bool c580 = poincare_constant(one, 1.0, 2.0) == 580.0;
    Outcome o;
    o.ok = anchor && forms && d11 && d10 && c580 && trig.pass;
    o.detail = "r(1)=" + fmt("%.15f", r1) + " (anchor 0.470600+-1e-6 " + (anchor ? "met" : "missed") +
               ", |diff|=" + fmt("%.3e", std::fabs(r1 - 0.470600)) + "), forms agree to " +
               fmt("%.1e", std::fabs(r1 - r1b)) + ", delta(1,1)=" + fmt("%.15f", delta_rate(one, 1.0)) +
               ", delta(1,0)=" + fmt("%.15f", delta_rate(one, 0.0)) + ", C(1,1,2)=" +
               fmt("%.0f", poincare_constant(one, 1.0, 2.0)) + ", identity error " +
               fmt("%.2e", trig.max_identity_error);
    return o;
}

Outcome exact_residual() {
    const BoundaryTrace phi = BoundaryTrace::from_fourier({0.0, 1.0}, {0.0});
    std::vector<double> sups;
    for (int n : {64, 128, 256}) {
        GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, n, n);
        sups.push_back(ns_residual(potential_flow(phi, g)).momentum_sup);
    }
    const double p1 = std::log2(sups[0] / sups[1]), p2 = std::log2(sups[1] / sups[2]);
    Outcome o;
    o.ok = sups[2] < 1e-3 && p1 >= 1.8 && p2 >= 1.8;
    o.detail = "momentum sup " + fmt("%.3e", sups[0]) + " / " + fmt("%.3e", sups[1]) + " / " + fmt("%.3e", sups[2]) +
               ", orders " + fmt("%.2f", p1) + ", " + fmt("%.2f", p2);
    return o;
}

Outcome pressure() {
    const double a = 1.0;
    GridPtr g = PolarGrid::geodesic(a, 1.0, 8.0, 256, 256);
    const BoundaryTrace phi = BoundaryTrace::from_fourier({0.0, 1.0}, {0.0});
    PressureReport p = check_pressure_nonconvergence(phi, a, g);
    // Relative 5% where the target is nonzero; where it vanishes the same 5%
    // is taken of the boundary oscillation a^2 (max phi - min phi).
    double worst = 0.0;
    const double spread = phi.max_value() - phi.min_value();
    for (std::size_t q = 0; q < p.targets.size(); ++q) {
        double t = p.targets[q], err = std::fabs(p.rays.limits[q] - t);
        double tol = std::fabs(t) > 1e-12 ? 0.05 * std::fabs(t) : 0.05 * a * a * spread;
        worst = std::max(worst, err / tol);
    }
    PressureReport c = check_pressure_nonconvergence(BoundaryTrace::from_fourier({1.0}, {0.0}), a, g);
    Outcome o;
    o.ok = worst <= 1.0 && std::fabs(p.gap - 4.0) <= 0.4 && c.gap < 1e-3;
    o.detail = "gap " + fmt("%.6f", p.gap) + " (expected 4), worst ray error " + fmt("%.3f", worst) +
               " of tolerance, constant-trace gap " + fmt("%.2e", c.gap);
    return o;
}

Outcome vorticity_decay() {
    SolverConfig cfg;
    cfg.a = 1.0;
    cfg.R0 = 1.0;
    cfg.R_out = 8.0;
    cfg.R1 = 2.0;
    cfg.n_r = 256;
    cfg.n_theta = 256;
    cfg.wall_data = {0.5};
    SolveResult res = picard_solve(cfg);
    DecayReport d = check_vorticity_decay(res.state, cfg.R1);
    const long violations = d.details.value("violations", -1L);
    const long nodes = d.details.value("nodes_checked", 0L);
    Outcome o;
    o.ok = res.report.converged && violations == 0 && nodes > 0 && d.fitted_rate >= 0.95 * d.theoretical_rate;
    o.detail = std::string(res.report.converged ? "converged" : "NOT converged") + " in " +
               std::to_string(res.report.iterations) + " iterations, sup|v|_a(R1)=" + fmt("%.4f", res.report.sup_v_R1) +
               ", delta=" + fmt("%.4f", d.theoretical_rate) + ", A=" + fmt("%.4f", d.details.value("A", 0.0)) +
               ", fitted rate " + fmt("%.4f", d.fitted_rate) + ", bound violations " + std::to_string(violations) +
               "/" + std::to_string(nodes);
    return o;
}

Outcome barrier() {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, 64, 16);
    double worst = INFINITY;
    bool all = true;
    for (const BarrierReport& b : barrier_sweep()) {
        worst = std::min(worst, b.analytic_margin);
        all = all && b.pass;
    }
    const double hand = check_barrier(1.0, delta_rate(Curvature(1.0), 1.0), 1.0, *g).analytic_margin;
    Outcome o;
    o.ok = all && worst > 0.0 && std::fabs(hand - 1.5) <= 1e-12;
    o.detail = "min margin over 16 cases " + fmt("%.6f", worst) + ", a=1 v_inf=1 margin " + fmt("%.15f", hand);
    return o;
}

Outcome audits() {
    const std::uint64_t seed = 12345;
    const int n = 100;
    std::vector<AuditReport> reps;
    for (double a : {0.5, 1.0, 2.0}) reps.push_back(audit_chart_gradient(a, n, seed + 1));
    for (double a : {0.5, 1.0, 2.0}) reps.push_back(audit_poincare(a, n, seed + 2));
    reps.push_back(audit_h1_vorticity({0.5, 1.0, 2.0}, n, seed + 3));
    reps.push_back(audit_pointwise_curl(1.0, n, seed + 4));
    int violations = 0, samples = 0;
    for (const AuditReport& r : reps) {
        violations += r.violations;
        samples += r.samples;
    }
    // Fixtures: the exact potential flow and the zero field.
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, 128, 128);
    FlowState exact = potential_flow(BoundaryTrace::from_fourier({0.0, 1.0}, {0.0}), g);
    InequalityReport fx_poincare = check_poincare(exact.v, 1.0, 1.0, 2.0);
    InequalityReport fx_h1 = check_h1_vorticity(exact, 1.0, 2.0, CutoffSpec{1.0, 2.0});
    FlowState zero;
    zero.a = 1.0;
    zero.v = OneFormField(g);
    zero.omega = ScalarField(g, 0.0);
    zero.P = ScalarField(g, 0.0);
    InequalityReport fx_zero = check_poincare(zero.v, 1.0, 1.0, 2.0);
    InequalityReport fx_zero_h1 = check_h1_vorticity(zero, 1.0, 2.0, CutoffSpec{1.0, 2.0});
    int fixture_failures = 0;
    for (const auto* r : {&fx_poincare, &fx_h1, &fx_zero, &fx_zero_h1})
        if (r->status == CheckStatus::fail) ++fixture_failures;
    Outcome o;
    o.ok = violations == 0 && fixture_failures == 0;
    std::string worst;
    for (const AuditReport& r : reps) worst += " " + r.name + "=" + fmt("%.3g", r.worst_ratio);
    o.detail = std::to_string(samples) + " samples, " + std::to_string(violations) + " violations, " +
               std::to_string(fixture_failures) + " fixture failures; worst ratios" + worst;
    return o;
}

Outcome transport_oracle() {
    const double a = 1.0, R0 = 1.0, Rout = 8.0;
    GridPtr g = PolarGrid::geodesic(a, R0, Rout, 256, 16);
    TransportVelocity vel{std::vector<double>(g->size(), 0.0), std::vector<double>(g->size(), 0.0)};
    TransportOptions opt;
    opt.method = LinearMethod::fft;
    ScalarField w = vorticity_transport_solve(vel, std::vector<double>(g->n_theta(), 1.0), g, opt);
    std::vector<double> rhos;
    for (int i = 0; i < g->n_r(); ++i) rhos.push_back(g->rho(i));
    std::vector<double> oracle = radial_vorticity_oracle(a, R0, Rout, rhos);
    // The outer ring carries the boundary value 0 on both sides and is skipped.
    double worst = 0.0;
    for (int i = 0; i + 1 < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) worst = std::max(worst, std::fabs(w(i, j) - oracle[i]) / std::fabs(oracle[i]));
    FlowState st;
    st.a = a;
    st.omega = w;
    st.v = OneFormField(g);
    DecayReport d = check_vorticity_decay(st, 2.0);
    const double d0 = delta_rate(Curvature(a), 0.0);
    Outcome o;
    o.ok = worst <= 1e-3 && d.fitted_rate > d0;
    o.detail = "worst relative error " + fmt("%.3e", worst) + " over " + std::to_string(g->n_r() - 1) +
               " rings, fitted rate " + fmt("%.4f", d.fitted_rate) + " vs delta(1,0)=" + fmt("%.4f", d0);
    return o;
}

Outcome stokes_scaling() {
    std::vector<StokesInstance> inst;
    for (int q = 0; q < 10; ++q) inst.push_back(StokesInstance::random(12345 + 100 + q));
    StokesReport r = check_stokes_supnorm_ratio(inst);
    Outcome o;
    o.ok = r.status == CheckStatus::pass && r.max_scaling_error <= 1e-6;
    o.detail = "max scaling error " + fmt("%.2e", r.max_scaling_error) + ", quadrature refinement change " +
               fmt("%.2e", r.max_refinement_change) + ", radius spread " + fmt("%.2e", r.max_radius_spread) +
               ", empirical sup ratio " + fmt("%.4f", r.empirical_sup);
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "constants regression", 1.0, constants},
        {2, "exact-solution residual", 60.0, exact_residual},
        {3, "pressure non-convergence", 60.0, pressure},
        {4, "vorticity decay", 600.0, vorticity_decay},
        {5, "barrier sweep", 1.0, barrier},
        {6, "inequality audits", 300.0, audits},
        {7, "radial transport oracle", 30.0, transport_oracle},
        {8, "Stokes rescaling invariance", 30.0, stokes_scaling},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = secs < c.budget_s;
        bool ok = o.ok && in_time;
        if (!ok) ++failures;
        std::printf("%s [%d] %s (%.2f s, budget %.0f s%s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.budget_s, in_time ? "" : ", OVER BUDGET", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
