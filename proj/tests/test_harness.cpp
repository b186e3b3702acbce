#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypflow/harness.hpp"

using namespace hypflow;

TEST_CASE("check status names") {
    CHECK(to_string(CheckStatus::pass) == "pass");
    CHECK(to_string(CheckStatus::fail) == "fail");
    CHECK(to_string(CheckStatus::vacuous) == "vacuous");
}

TEST_CASE("log slope") {
    std::vector<double> x, y;
    for (int q = 0; q < 20; ++q) {
        x.push_back(0.25 * q);
        y.push_back(3.0 * std::exp(-1.7 * x.back()));
    }
    CHECK(log_slope(x, y, 0.0, 10.0) == doctest::Approx(-1.7));
    y[3] = 0.0;
    CHECK(log_slope(x, y, 1.0, 3.0) == doctest::Approx(-1.7));
}

TEST_CASE("cutoff functions") {
    CutoffSpec cut{1.0, 2.0};
    CHECK(cut.valid());
    CHECK(cut.phi1(1.2) == 0.0);
    CHECK(cut.phi1(1.5) == 0.0);
    CHECK(cut.phi1(2.0) == doctest::Approx(1.0));
    CHECK(cut.phi1(3.0) == 1.0);
    CHECK(cut.phi1(1.75) == doctest::Approx(0.5));
    CHECK(CutoffSpec::phi2(1.0) == doctest::Approx(1.0));
    CHECK(CutoffSpec::phi2(2.0) == doctest::Approx(0.0));
    CHECK(CutoffSpec::phi2(0.5) == 1.0);
    CHECK(CutoffSpec::phi2(2.5) == 0.0);
    // Quintic smoothstep slope peaks at 15/8 over the ramp length.
    CHECK(cut.dphi1(1.75) == doctest::Approx(15.0 / 8 / 0.5));
    CHECK(CutoffSpec::dphi2(1.5) == doctest::Approx(-15.0 / 8));
    double h = 1e-5;
    for (double r : {1.6, 1.7, 1.9})
        CHECK(cut.d2phi1(r) == doctest::Approx((cut.dphi1(r + h) - cut.dphi1(r - h)) / (2 * h)).epsilon(1e-6));
    CHECK(cut.h1_constant(1.0) > cut.dphi1(1.75));
    CHECK(cut.h1_constant(1.0) < 40.0);
}

TEST_CASE("barrier margins") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, 64, 16);
    // delta = 1 at a = 1, v_inf = 0: margin -(1 - 1 - 2) = 2.
    BarrierReport r = check_barrier(1.0, 1.0, 0.0, *g);
    CHECK(r.analytic_margin == doctest::Approx(2.0));
    CHECK(r.pass);
    BarrierReport s = check_barrier(1.0, std::sqrt(0.5), 1.0, *g);
    CHECK(s.analytic_margin == doctest::Approx(1.5));
    CHECK(s.nodal_margin > 0.0);
    BarrierReport bad = check_barrier(1.0, 3.0, 0.0, *g);
    CHECK_FALSE(bad.pass);
    auto sweep = barrier_sweep();
    CHECK(sweep.size() == 16);
    for (const auto& b : sweep) {
        CHECK(b.pass);
        CHECK(b.delta == doctest::Approx(delta_rate(Curvature(b.a), b.v_inf)));
    }
}

TEST_CASE("inequality checks are vacuous on the zero field") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 6.0, 48, 16);
    OneFormField zero(g);
    InequalityReport p = check_poincare(zero, 1.0, 1.0, 2.0);
    CHECK(p.status == CheckStatus::vacuous);
    FlowState st;
    st.v = zero;
    st.omega = ScalarField(g, 0.0);
    st.P = ScalarField(g, 0.0);
    st.a = 1.0;
    CHECK(check_h1_vorticity(st, 1.0, 2.0, CutoffSpec{1.0, 2.0}).status == CheckStatus::vacuous);
}

TEST_CASE("Poincare inequality on a bump flow") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 6.0, 192, 64);
    OneFormField v = random_bump_flow(g, 1.5, 4.0, 3);
    InequalityReport p = check_poincare(v, 1.0, 1.0, 2.0);
    CHECK(p.status == CheckStatus::pass);
    CHECK(p.lhs > 0.0);
    CHECK(p.ratio <= 1.0);
}

TEST_CASE("velocity decay on an exact potential flow") {
    BoundaryTrace phi = BoundaryTrace::from_fourier({0.0, 1.0}, {0.0});
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, 128, 64);
    FlowState st = potential_flow(poisson_harmonic(phi, g), 1.0);
    DecayReport d = check_velocity_decay(st);
    CHECK(d.status == CheckStatus::pass);
    CHECK(d.fitted_rate > 0.5);
    CHECK(d.sup_values.back() < 1e-2 * d.sup_values.front());
    CHECK(d.to_csv().rfind("rho,sup_value,bound_value", 0) == 0);
    CHECK(d.to_json()["status"] == "pass");
}

TEST_CASE("velocity decay fails on a non-decaying field") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 8.0, 64, 16);
    FlowState st;
    st.a = 1.0;
    st.v = streamfunction_to_velocity(ScalarField(g, 0.0), 0.0);
    for (int i = 0; i < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) st.v.v1[g->idx(i, j)] = g->lambda(i);  // |v|_a = 1
    DecayReport d = check_velocity_decay(st);
    CHECK(d.status == CheckStatus::fail);
}

TEST_CASE("pressure limits differ along rays") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 10.0, 256, 64);
    PressureReport r = check_pressure_nonconvergence(BoundaryTrace::from_fourier({0.0, 1.0}, {0.0}), 1.0, g);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.expected_gap == doctest::Approx(4.0));
    CHECK(r.gap >= 0.9 * r.expected_gap);
    PressureReport c = check_pressure_nonconvergence(BoundaryTrace::from_fourier({5.0}, {0.0}), 1.0, g);
    CHECK(c.status == CheckStatus::vacuous);
}

TEST_CASE("radial vorticity oracle") {
    for (double a : {0.5, 1.0, 2.0}) {
        const double R0 = 1.0 / a, Rout = 8.0 / a;
        std::vector<double> rhos;
        for (int q = 0; q <= 70; ++q) rhos.push_back(R0 + (Rout - R0) * q / 70.0);
        std::vector<double> w = radial_vorticity_oracle(a, R0, Rout, rhos);
        CHECK(w.front() == doctest::Approx(1.0));
        CHECK(std::fabs(w.back()) < 1e-12);
        for (std::size_t q = 1; q < w.size(); ++q) CHECK(w[q] <= w[q - 1]);
        // Decay rate approaches tau_2 = 2a far from both ends.
        double slope = std::log(w[30] / w[20]) / (rhos[30] - rhos[20]);
        CHECK(-slope == doctest::Approx(2 * a).epsilon(0.05));
    }
}

TEST_CASE("audits are deterministic and hold") {
    AuditReport c1 = audit_chart_gradient(1.0, 10, 42);
    AuditReport c2 = audit_chart_gradient(1.0, 10, 42);
    CHECK(c1.worst_ratio == c2.worst_ratio);
    CHECK(c1.pass());
    CHECK(c1.samples == 10);
    CHECK(audit_poincare(1.0, 10, 7).pass());
    CHECK(audit_pointwise_curl(1.0, 10, 7).pass());
    AuditReport h = audit_h1_vorticity({1.0}, 4, 9);
    CHECK(h.pass());
    CHECK(h.samples == 4);
    AuditReport l = audit_ladyzhenskaya(1.0, 5, 3, 32);
    CHECK(l.worst_ratio > 0.0);
    CHECK(std::isfinite(l.worst_ratio));
    CHECK(l.to_json()["seed"] == 3);
}

TEST_CASE("Stokes ratio is scale invariant") {
    StokesInstance base = StokesInstance::random(5);
    StokesInstance a = base.on_disk(2.0);
    StokesRatio direct = stokes_supnorm_ratio(a), unit = stokes_supnorm_ratio(a.rescaled_to_unit());
    CHECK(direct.ratio > 0.0);
    CHECK(unit.ratio == doctest::Approx(direct.ratio).epsilon(1e-10));
    CHECK(StokesInstance::random(5).psi == base.psi);
    std::vector<StokesInstance> insts;
    for (std::uint64_t s = 0; s < 3; ++s) insts.push_back(StokesInstance::random(100 + s));
    StokesReport r = check_stokes_supnorm_ratio(insts);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.ratios.size() == 9);
    StokesInstance zero;
    zero.psi = {{0.0}};
    zero.P = {{0.0}};
    CHECK(check_stokes_supnorm_ratio({zero}).status == CheckStatus::vacuous);
}

TEST_CASE("suite configuration") {
    SuiteConfig cfg = parse_suite_config("[geometry]\nn_r = 64\nn_theta = 32\n[suite]\nseed = 7\naudit_samples = 3\n"
                                         "exact_grid = 64x32\nchecks = constants barrier\n");
    CHECK(cfg.seed == 7);
    CHECK(cfg.audit_samples == 3);
    CHECK(cfg.exact_n_r == 64);
    CHECK(cfg.exact_n_theta == 32);
    CHECK(cfg.checks == std::vector<std::string>{"constants", "barrier"});
    CHECK(cfg.solver.n_r == 64);
    CHECK_THROWS_AS(parse_suite_config("[suite]\nchecks = constants warp\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("[suite]\nexact_grid = big\n"), ConfigError);
    CHECK(suite_check_names().size() == 8);
}

TEST_CASE("suite runs a cheap subset") {
    SuiteConfig cfg;
    cfg.checks = {"constants", "barrier", "pressure"};
    cfg.solver.wall_data = {0.5};
    SuiteResult r = run_suite(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.report["checks"].size() == 4);
    CHECK(r.report.contains("provenance"));
}
