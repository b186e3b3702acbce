#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypflow/harness.hpp"
#include "hypflow/solver.hpp"

using namespace hypflow;

namespace {

SolverConfig small_config(double U, int n_r = 96, int n_theta = 16) {
    SolverConfig cfg;
    cfg.a = 1.0;
    cfg.R0 = 1.0;
    cfg.R_out = 7.0;
    cfg.n_r = n_r;
    cfg.n_theta = n_theta;
    cfg.wall_data = {U};
    cfg.tol = 1e-9;
    return cfg;
}

const char* kValidConfig = R"(
[geometry]
a = 1.5
R0 = 1
R_out = 6
n_r = 64
n_theta = 32
R1 = 2

[boundary]
wall_cos = 0.1, 0.2
wall_sin = 0, 0, 0.05
circulation = 0.3
circulation_mode = prescribed

[iteration]
relaxation = 0.5
tol = 1e-7
max_iters = 50
transport_solver = sor
stream_solver = cg
sor_omega = 1.5
parallel = off
)";

}  // namespace

TEST_CASE("configuration parsing") {
    SolverConfig cfg = parse_solver_config(kValidConfig);
    CHECK(cfg.a == 1.5);
    CHECK(cfg.n_theta == 32);
    CHECK(cfg.circulation_mode == CirculationMode::prescribed);
    CHECK(cfg.transport_method == LinearMethod::sor);
    CHECK(cfg.stream_method == LinearMethod::cg);
    CHECK_FALSE(cfg.parallel);
    REQUIRE(cfg.wall_data.size() == 32);
    CHECK(cfg.wall_data[0] == doctest::Approx(0.3));
    double t = 2 * std::numbers::pi * 5 / 32;
    CHECK(cfg.wall_data[5] == doctest::Approx(0.1 + 0.2 * std::cos(t) + 0.05 * std::sin(2 * t)));
    CHECK(cfg.wall_samples().size() == 32);

    SolverConfig dflt = parse_solver_config("");
    CHECK(dflt.wall_samples() == std::vector<double>(dflt.n_theta, 0.0));
    CHECK(parse_solver_config("[boundary]\nwall_profile = 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16\n[geometry]\nn_theta = 16\n")
              .wall_data.size() == 16);
}

TEST_CASE("configuration errors") {
    const char* bad[] = {
        "[mesh]\na = 1\n",
        "[geometry]\ncurvature = 1\n",
        "[geometry]\na = one\n",
        "[geometry]\na = -1\n",
        "[geometry]\nn_theta = 48\n",
        "[geometry]\nn_r = 8\n",
        "[geometry]\nR_out = 2.5\n",
        "[geometry]\nR1 = 0.5\n",
        "[geometry]\nR1 = 9\n",
        "[geometry]\na = 1\nR_out = 40\n",
        "[boundary]\nwall_speed = 1\nwall_profile = 1 2\n",
        "[boundary]\nwall_profile = 1 2 3\n",
        "[boundary]\nwall_cos = 1, x\n",
        "[boundary]\ncirculation_mode = free\n",
        "[iteration]\nrelaxation = 0\n",
        "[iteration]\nrelaxation = 1.5\n",
        "[iteration]\ntol = 0\n",
        "[iteration]\nsor_omega = 2\n",
        "[iteration]\nparallel = maybe\n",
        "[iteration]\ntransport_solver = multigrid\n",
        "[iteration]\nmax_iters = 0\n",
        "[geometry\n",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_solver_config(text), ConfigError);
    }
    CHECK_THROWS_AS(load_solver_config("/nonexistent/solver.ini"), ConfigError);
}

TEST_CASE("trivial data short-circuits to the zero flow") {
    SolveResult res = picard_solve(small_config(0.0));
    CHECK(res.report.short_circuit);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    CHECK(res.report.history == std::vector<double>{0.0});
    for (double w : res.state.omega.values) CHECK(w == 0.0);
    for (double v : res.state.v.v1) CHECK(v == 0.0);
}

TEST_CASE("Thom wall vorticity is exact for quadratic streamfunctions") {
    const double a = 1.3;
    GridPtr g = PolarGrid::geodesic(a, 0.8, 5.0, 40, 16);
    const double R0 = g->rho_in(), s0 = g->s(0), c0 = g->dlog_s(0);
    std::vector<double> U(g->n_theta());
    for (int j = 0; j < g->n_theta(); ++j) U[j] = -0.3 + 0.1 * std::cos(g->theta(j));
    const double circ = 0.4;
    ScalarField psi = sample_polar(g, [&](double r, double t) {
        double slope = circ / (2 * std::numbers::pi * s0) - (-0.3 + 0.1 * std::cos(t));
        double x = r - R0;
        return slope * x + 0.7 * x * x * (1 + 0.5 * std::cos(2 * t));
    });
    std::vector<double> w = wall_vorticity(psi, U, *g, circ);
    for (int j = 0; j < g->n_theta(); ++j) {
        double t = g->theta(j);
        double slope = circ / (2 * std::numbers::pi * s0) - U[j];
        double expect = -(2 * 0.7 * (1 + 0.5 * std::cos(2 * t)) + c0 * slope);
        CHECK(w[j] == doctest::Approx(expect).epsilon(1e-10));
    }
    std::vector<double> w1 = wall_vorticity(psi, {-0.3}, *g, circ);
    CHECK(w1.size() == static_cast<std::size_t>(g->n_theta()));
    CHECK_THROWS_AS(wall_vorticity(psi, {1.0, 2.0}, *g, circ), DomainError);
}

TEST_CASE("stream solve converges at second order") {
    const double a = 1.0, R0 = 1.0, Rout = 6.0, psi_bc = 0.25;
    const double kk = std::numbers::pi / (Rout - R0);
    auto exact = [&](double r, double t) {
        return psi_bc * (Rout - r) / (Rout - R0) + std::sin(kk * (r - R0)) * std::cos(2 * t);
    };
    auto minus_lap = [&](double r, double t) {
        double s = std::sinh(a * r) / a, c = a / std::tanh(a * r);
        double g = std::sin(kk * (r - R0)), g1 = kk * std::cos(kk * (r - R0)), g2 = -kk * kk * g;
        return -((g2 + c * g1 - 4 * g / (s * s)) * std::cos(2 * t) - c * psi_bc / (Rout - R0));
    };
    std::vector<double> errs;
    for (int n : {64, 128, 256}) {
        GridPtr g = PolarGrid::geodesic(a, R0, Rout, n, n / 2);
        ScalarField omega = sample_polar(g, minus_lap);
        for (LinearMethod m : {LinearMethod::fft, LinearMethod::cg}) {
            LinearSolveResult info;
            ScalarField psi = stream_poisson_solve(omega, psi_bc, g, m, {}, &info);
            CHECK(info.converged);
            double err = 0.0;
            for (int i = 0; i < g->n_r(); ++i)
                for (int j = 0; j < g->n_theta(); ++j)
                    err = std::max(err, std::fabs(psi(i, j) - exact(g->rho(i), g->theta(j))));
            if (m == LinearMethod::fft) errs.push_back(err);
            for (int j = 0; j < g->n_theta(); ++j) {
                CHECK(psi(0, j) == psi_bc);
                CHECK(psi(g->n_r() - 1, j) == 0.0);
            }
        }
    }
    CHECK(errs[0] / errs[1] > 3.5);
    CHECK(errs[1] / errs[2] > 3.5);
    CHECK(errs[2] < 1e-4);
}

TEST_CASE("transport coefficients") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 5.0, 32, 16);
    TransportVelocity v = transport_velocity(ScalarField(g, 0.0), 2 * std::numbers::pi);
    for (int i = 1; i + 1 < g->n_r(); ++i) {
        CHECK(v.vr[g->idx(i, 3)] == 0.0);
        CHECK(v.vt[g->idx(i, 3)] == doctest::Approx(1.0 / (g->s(i) * g->s(i))));
    }
}

TEST_CASE("transport solve with zero velocity matches the radial oracle") {
    const double a = 1.0;
    GridPtr g = PolarGrid::geodesic(a, 1.0, 7.0, 256, 16);
    TransportVelocity zero{std::vector<double>(g->size(), 0.0), std::vector<double>(g->size(), 0.0)};
    LinearSolveResult info;
    TransportOptions opt;
    opt.linear.tol = 1e-12;
    ScalarField w = vorticity_transport_solve(zero, std::vector<double>(g->n_theta(), 1.0), g, opt, &info);
    CHECK(info.converged);
    std::vector<double> rhos;
    for (int i = 0; i < g->n_r(); ++i) rhos.push_back(g->rho(i));
    std::vector<double> oracle = radial_vorticity_oracle(a, 1.0, 7.0, rhos);
    double worst = 0.0;
    for (int i = 0; i < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) worst = std::max(worst, std::fabs(w(i, j) - oracle[i]));
    CHECK(worst < 1e-3);
    CHECK(transport_residual(zero, w) < 1e-10);
}

TEST_CASE("rotating obstacle: axisymmetric flow agrees with the radial oracle") {
    SolverConfig cfg = small_config(0.1, 256, 16);
    SolveResult res = picard_solve(cfg);
    REQUIRE(res.report.converged);
    CHECK_FALSE(res.report.nan_detected);
    const PolarGrid& g = *res.state.omega.grid;
    std::vector<double> rhos;
    for (int i = 0; i < g.n_r(); ++i) rhos.push_back(g.rho(i));
    std::vector<double> oracle = radial_vorticity_oracle(cfg.a, cfg.R0, cfg.R_out, rhos);
    const double w0 = res.state.omega(0, 0);
    CHECK(std::fabs(w0) > 0.0);
    double worst = 0.0;
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) worst = std::max(worst, std::fabs(res.state.omega(i, j) / w0 - oracle[i]));
    CHECK(worst < 2e-3);
    CHECK(std::fabs(circulation_condition(*res.state.psi, res.state.omega, res.state.circulation)) < 1e-6);
    CHECK(res.report.mass_residual < 1e-6);
}

TEST_CASE("Picard iteration contracts for slow walls") {
    for (double a : {0.5, 1.0, 2.0}) {
        SolverConfig cfg = small_config(0.1 * a, 96, 32);
        cfg.a = a;
        cfg.R0 = 1.0 / a;
        cfg.R1 = 2.0 / a;
        cfg.R_out = 7.0 / a;
        std::vector<double> U(32);
        for (int j = 0; j < 32; ++j) U[j] = 0.1 * a * std::cos(2 * std::numbers::pi * j / 32);
        cfg.wall_data = U;
        SolveResult res = picard_solve(cfg);
        CAPTURE(a);
        CHECK(res.report.converged);
        CHECK(res.report.iterations < 60);
        const auto& h = res.report.history;
        REQUIRE(h.size() >= 2);
        double rate = std::pow(h.back() / h.front(), 1.0 / static_cast<double>(h.size() - 1));
        CHECK(rate < 0.9);
        CHECK(res.report.wall_residual < 1e-8);
    }
}

TEST_CASE("truncation radius barely moves the near field") {
    SolverConfig near = small_config(0.2, 96, 16);
    near.R_out = 6.0;
    SolverConfig far = near;
    far.R_out = 9.0;
    far.n_r = 153;  // same radial spacing
    SolveResult r6 = picard_solve(near), r9 = picard_solve(far);
    REQUIRE(r6.report.converged);
    REQUIRE(r9.report.converged);
    const PolarGrid& g6 = *r6.state.omega.grid;
    const PolarGrid& g9 = *r9.state.omega.grid;
    CHECK(g6.h() == doctest::Approx(g9.h()));
    double worst = 0.0, scale = 0.0;
    for (int i = 0; g6.rho(i) <= 3.0; ++i) {
        worst = std::max(worst, std::fabs(r6.state.omega(i, 0) - r9.state.omega(i, 0)));
        scale = std::max(scale, std::fabs(r9.state.omega(i, 0)));
    }
    CHECK(worst < 1e-3 * scale);
    // The circulation feels the truncation through the homogeneous mode
    // log tanh(a rho / 2) ~ -2 exp(-a rho) of the stream equation.
    CHECK(std::fabs(r6.state.circulation - r9.state.circulation) < 3 * std::exp(-6.0) * std::fabs(r9.state.circulation));
}

TEST_CASE("serial and parallel solves give the same flow") {
    SolverConfig cfg = small_config(0.3, 64, 32);
    std::vector<double> U(32);
    for (int j = 0; j < 32; ++j) U[j] = 0.3 + 0.1 * std::sin(2 * std::numbers::pi * j / 32);
    cfg.wall_data = U;
    cfg.parallel = false;
    SolveResult s = picard_solve(cfg);
    cfg.parallel = true;
    SolveResult p = picard_solve(cfg);
    CHECK(s.report.iterations == p.report.iterations);
    double worst = 0.0;
    for (std::size_t q = 0; q < s.state.omega.size(); ++q)
        worst = std::max(worst, std::fabs(s.state.omega.values[q] - p.state.omega.values[q]));
    CHECK(worst < 1e-10);
}

TEST_CASE("prescribed circulation is held fixed") {
    SolverConfig cfg = small_config(0.2, 64, 16);
    cfg.circulation = 0.5;
    cfg.circulation_mode = CirculationMode::prescribed;
    SolveResult res = picard_solve(cfg);
    CHECK(res.report.converged);
    CHECK(res.state.circulation == 0.5);
}

TEST_CASE("report serializes") {
    SolveResult res = picard_solve(small_config(0.1, 32, 16));
    auto j = nlohmann::json::parse(res.report.to_json());
    CHECK(j["converged"].get<bool>() == res.report.converged);
    CHECK(j["iterations"].get<int>() == res.report.iterations);
    CHECK(j.contains("momentum_relative"));
}
