#include <doctest.h>

#include <cmath>
#include <random>

#include "hypflow/elliptic.hpp"
#include "hypflow/kernels.hpp"

using namespace hypflow;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    return x;
}

/// Non-symmetric operator with upwind-like perturbations, diagonally dominant.
FivePointOperator random_operator(int nr, int nt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    FivePointOperator A(nr, nt);
    for (std::size_t q = 0; q < A.size(); ++q) {
        A.n[q] = u(rng);
        A.s[q] = u(rng);
        A.e[q] = u(rng);
        A.w[q] = u(rng);
        A.c[q] = -(A.n[q] + A.s[q] + A.e[q] + A.w[q]) - u(rng);
    }
    return A;
}

std::vector<double> ring_weights(const PolarGrid& g) {
    std::vector<double> w(g.n_r());
    for (int i = 0; i < g.n_r(); ++i) w[i] = g.s(i);
    return w;
}

}  // namespace

TEST_CASE("OpenMP kernels reproduce the serial reference bitwise") {
    for (auto [nr, nt] : {std::pair{17, 16}, std::pair{64, 32}, std::pair{129, 64}}) {
        FivePointOperator A = random_operator(nr, nt, 3);
        std::vector<double> b = random_vector(A.size(), 4), x0 = random_vector(A.size(), 5);
        std::vector<double> y1(A.size()), y2(A.size());
        kernels::serial::apply(A, x0, y1);
        kernels::omp::apply(A, x0, y2);
        CHECK(y1 == y2);
        CHECK(kernels::serial::residual_max(A, x0, b) == kernels::omp::residual_max(A, x0, b));
        for (double omega : {1.0, 1.5}) {
            std::vector<double> xs = x0, xo = x0;
            for (int it = 0; it < 5; ++it) {
                kernels::serial::rb_sor_sweep(A, xs, b, omega);
                kernels::omp::rb_sor_sweep(A, xo, b, omega);
            }
            CHECK(xs == xo);
            xs = x0;
            xo = x0;
            for (int it = 0; it < 5; ++it) {
                kernels::serial::zebra_line_sor_sweep(A, xs, b, omega);
                kernels::omp::zebra_line_sor_sweep(A, xo, b, omega);
            }
            CHECK(xs == xo);
        }
        std::vector<double> w = random_vector(nr, 9);
        double ds = kernels::serial::weighted_dot(w, nt, x0, b), dp = kernels::omp::weighted_dot(w, nt, x0, b);
        CHECK(ds == doctest::Approx(dp).epsilon(1e-13));
    }
}

TEST_CASE("sweeps hold the Dirichlet rings fixed") {
    FivePointOperator A = random_operator(20, 16, 1);
    std::vector<double> b = random_vector(A.size(), 2), x = random_vector(A.size(), 3), x0 = x;
    kernels::serial::rb_sor_sweep(A, x, b, 1.2);
    kernels::serial::zebra_line_sor_sweep(A, x, b, 1.2);
    for (int j = 0; j < 16; ++j) {
        CHECK(x[A.idx(0, j)] == x0[A.idx(0, j)]);
        CHECK(x[A.idx(19, j)] == x0[A.idx(19, j)]);
    }
}

TEST_CASE("Thomas algorithm") {
    const int m = 7;
    std::vector<double> lo(m, -1.0), di(m, 4.0), up(m, -1.0), x = random_vector(m, 8), rhs(m), scratch(m);
    for (int i = 0; i < m; ++i)
        rhs[i] = di[i] * x[i] + (i > 0 ? lo[i] * x[i - 1] : 0.0) + (i + 1 < m ? up[i] * x[i + 1] : 0.0);
    kernels::thomas(lo.data(), di.data(), up.data(), rhs.data(), m, scratch.data());
    for (int i = 0; i < m; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-14));
}

TEST_CASE("linear solvers agree on the finite-volume operator") {
    for (double c0 : {0.0, 2.0}) {
        GridPtr g = PolarGrid::geodesic(1.0, 1.0, 6.0, 64, 32);
        RadialSpectralOperator A = fv_laplacian(*g, c0);
        std::vector<double> b = random_vector(g->size(), 21), x0(g->size(), 0.0);
        for (int j = 0; j < g->n_theta(); ++j) {
            x0[g->idx(0, j)] = std::cos(j * g->k());
            x0[g->idx(g->n_r() - 1, j)] = 0.0;
        }
        LinearSolveOptions opt;
        opt.tol = 1e-11;
        opt.max_iters = 200000;
        const auto w = ring_weights(*g);
        std::vector<double> ref = x0;
        LinearSolveResult rf = solve_spectral(A, ref, b, LinearMethod::fft, opt, w);
        CHECK(rf.converged);
        FivePointOperator F = A.to_five_point();
        CHECK(relative_residual(F, ref, b) < 1e-11);
        for (LinearMethod m : {LinearMethod::sor, LinearMethod::line_sor, LinearMethod::cg}) {
            std::vector<double> x = x0;
            opt.omega = m == LinearMethod::cg ? 1.0 : 1.8;
            LinearSolveResult r = solve_spectral(A, x, b, m, opt, w);
            CHECK(r.converged);
            double diff = 0.0, scale = 0.0;
            for (std::size_t q = 0; q < x.size(); ++q) {
                diff = std::max(diff, std::fabs(x[q] - ref[q]));
                scale = std::max(scale, std::fabs(ref[q]));
            }
            CHECK(diff < 1e-7 * scale);
        }
    }
}

TEST_CASE("serial and parallel solves agree") {
    GridPtr g = PolarGrid::geodesic(1.0, 1.0, 6.0, 48, 32);
    FivePointOperator F = fv_laplacian(*g, 2.0).to_five_point();
    std::vector<double> b = random_vector(g->size(), 2);
    LinearSolveOptions opt;
    opt.tol = 1e-10;
    opt.parallel = false;
    std::vector<double> xs(g->size(), 0.0), xp(g->size(), 0.0);
    LinearSolveResult rs = line_sor_solve(F, xs, b, opt);
    opt.parallel = true;
    LinearSolveResult rp = line_sor_solve(F, xp, b, opt);
    CHECK(rs.iterations == rp.iterations);
    CHECK(xs == xp);
}

TEST_CASE("method names") {
    for (auto m : {LinearMethod::fft, LinearMethod::sor, LinearMethod::line_sor, LinearMethod::cg})
        CHECK(parse_linear_method(to_string(m)) == m);
    CHECK_THROWS(parse_linear_method("multigrid"));
}

TEST_CASE("finite-volume operator is symmetric after ring scaling") {
    GridPtr g = PolarGrid::geodesic(0.7, 0.5, 4.0, 32, 16);
    RadialSpectralOperator A = fv_laplacian(*g, 0.3);
    for (int i = 1; i + 2 < g->n_r(); ++i)
        CHECK(g->s(i) * A.upper[i] == doctest::Approx(g->s(i + 1) * A.lower[i + 1]).epsilon(1e-13));
    CHECK(face_s(*g, 3, +1) == doctest::Approx(std::sinh(0.7 * (g->rho(3) + g->h() / 2)) / 0.7));
}
