#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypflow/hypgeom.hpp"

using namespace hypflow;

namespace {
std::mt19937_64 rng(20261016);
ChartPoint random_chart(double rmax = 0.99) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = rmax * std::sqrt(u(rng)), t = 2 * std::numbers::pi * u(rng);
    return {r * std::cos(t), r * std::sin(t)};
}
}  // namespace

TEST_CASE("curvature must be positive") {
    CHECK_THROWS_AS(Curvature(0.0), DomainError);
    CHECK_THROWS_AS(Curvature(-1.0), DomainError);
    CHECK_THROWS_AS(Curvature(NAN), DomainError);
    CHECK(double(Curvature(2.5)) == 2.5);
}

TEST_CASE("chart maps at known points") {
    const Curvature one(1.0);
    ChartPoint c = to_chart({1.0, 0.0, 0.0}, one);
    CHECK(c.y1 == doctest::Approx(0.0));
    CHECK(c.y2 == doctest::Approx(0.0));
    ChartPoint y = to_chart({std::sqrt(2.0), 1.0, 0.0}, one);
    CHECK(std::fabs(y.y1 - 0.41421356237309503) < 1e-15);
    CHECK(y.y2 == 0.0);

    HyperboloidPoint p = from_chart({0.5, 0.0}, one);
    CHECK(std::fabs(p.x0 - 5.0 / 3.0) < 1e-15);
    CHECK(std::fabs(p.x1 - 4.0 / 3.0) < 1e-15);
    CHECK(p.x2 == 0.0);
    HyperboloidPoint o = from_chart({0.0, 0.0}, one);
    CHECK(o.x0 == doctest::Approx(1.0));
    HyperboloidPoint o2 = from_chart({0.0, 0.0}, Curvature(2.0));
    CHECK(to_chart(o2, Curvature(2.0)).y1 == doctest::Approx(0.0));
}

TEST_CASE("chart maps reject invalid input") {
    const Curvature one(1.0);
    CHECK_THROWS_AS(to_chart({2.0, 0.0, 0.0}, one), DomainError);
    CHECK_THROWS_AS(to_chart({-1.0, 0.0, 0.0}, one), DomainError);
    CHECK_THROWS_AS(from_chart({1.0, 0.0}, one), DomainError);
    CHECK_THROWS_AS(from_chart({0.8, 0.6}, one), DomainError);
    CHECK_THROWS_AS(from_chart({1.0 - 1e-9, 0.0}, one), DomainError);
}

TEST_CASE("chart round trip and hyperboloid invariant on random points") {
    for (double a : {0.3, 1.0, 2.0}) {
        const Curvature ca(a);
        for (int q = 0; q < 1000; ++q) {
            ChartPoint y = random_chart();
            HyperboloidPoint p = from_chart(y, ca);
            double inv = -lorentz(p, p);
            CHECK(std::fabs(inv * a * a - 1.0) < 1e-12 * std::max(1.0, p.x0 * p.x0 * a * a));
            ChartPoint z = to_chart(p, ca);
            CHECK(std::fabs(z.y1 - y.y1) < 1e-12);
            CHECK(std::fabs(z.y2 - y.y2) < 1e-12);
        }
    }
}

TEST_CASE("conformal factor") {
    CHECK(conformal_factor({0.0, 0.0}, Curvature(1.0)) == doctest::Approx(2.0));
    CHECK(std::fabs(conformal_factor({0.5, 0.0}, Curvature(1.0)) - 8.0 / 3.0) < 1e-15);
    CHECK(conformal_factor({0.0, 0.0}, Curvature(2.0)) == doctest::Approx(1.0));
    double prev = 0.0;
    for (int q = 0; q < 100; ++q) {
        double lam = conformal_factor_r(0.0099 * q, Curvature(1.0));
        CHECK(lam > prev);
        prev = lam;
    }
}

TEST_CASE("distance from the origin") {
    CHECK(std::fabs(dist_origin({0.5, 0.0}, Curvature(1.0)) - std::log(3.0)) < 1e-15);
    CHECK(dist_origin({0.0, 0.0}, Curvature(3.0)) == 0.0);
    for (double a : {0.5, 1.0, 3.0})
        for (double t : {0.0, 1.0, 4.0}) {
            double r = std::tanh(a / 2);
            CHECK(dist_origin({r * std::cos(t), r * std::sin(t)}, Curvature(a)) == doctest::Approx(1.0).epsilon(1e-13));
        }
}

TEST_CASE("two point distance agrees with the origin formula and is an isometry invariant") {
    for (double a : {0.5, 1.0, 2.0}) {
        const Curvature ca(a);
        HyperboloidPoint o = from_chart({0.0, 0.0}, ca);
        for (int q = 0; q < 1000; ++q) {
            ChartPoint y = random_chart(0.95);
            double d = dist(o, from_chart(y, ca), ca);
            CHECK(std::fabs(d - dist_origin(y, ca)) < 1e-10);
        }
        CHECK(std::fabs(dist(from_chart({0.0, 0.0}, ca), from_chart({0.5, 0.0}, ca), ca) - std::log(3.0) / a) < 1e-12);
        for (int q = 0; q < 200; ++q) {
            ChartPoint y = random_chart(0.9), z = random_chart(0.9), w = random_chart(0.9);
            HyperboloidPoint p = from_chart(y, ca), r = from_chart(z, ca), s = from_chart(w, ca);
            CHECK(dist(p, p, ca) == doctest::Approx(0.0));
            CHECK(dist(p, r, ca) == doctest::Approx(dist(r, p, ca)).epsilon(1e-12));
            CHECK(dist(p, s, ca) <= dist(p, r, ca) + dist(r, s, ca) + 1e-9);
            double t = 0.7 + q;
            auto rot = [t](ChartPoint c) {
                return ChartPoint{c.y1 * std::cos(t) - c.y2 * std::sin(t), c.y1 * std::sin(t) + c.y2 * std::cos(t)};
            };
            CHECK(std::fabs(dist(from_chart(rot(y), ca), from_chart(rot(z), ca), ca) - dist(p, r, ca)) < 1e-10);
        }
    }
}

TEST_CASE("ball radius map") {
    CHECK(std::fabs(ball_radius_in_chart(1.0, Curvature(1.0)) - 0.46211715726000974) < 1e-15);
    CHECK(ball_radius_in_chart(1e-12, Curvature(1.0)) < 1e-12);
    double prev = 0.0;
    for (double R = 0.1; R < 30; R += 0.1) {
        double r = ball_radius_in_chart(R, Curvature(1.0));
        CHECK(r >= prev);
        CHECK(r < 1.0 + 1e-16);
        prev = r;
        if (R < 15) CHECK(std::fabs(dist_origin({r, 0.0}, Curvature(1.0)) - R) < 1e-9 * std::max(1.0, R));
    }
}

TEST_CASE("r(a) closed forms") {
    // High precision value of log((1 + 3e)/(3 + e)).
    CHECK(std::fabs(r_of_a(Curvature(1.0)) - 0.47061491973408121) < 1e-14);
    CHECK(std::fabs(r_of_a(Curvature(0.5)) - 0.49230817586028994) < 1e-14);
    CHECK(std::fabs(r_of_a(Curvature(2.0)) - 0.40099158142700688) < 1e-14);
    for (int q = 0; q <= 500; ++q) {
        double a = std::pow(10.0, -3.0 + 5.0 * q / 500);
        const Curvature ca(a);
        double r = r_of_a(ca);
        CHECK(std::fabs(r - r_of_a_atanh(ca)) <= 1e-12 * r);
        CHECK(r < 1.0);
        CHECK(std::fabs(ball_radius_in_chart(r, ca) - 0.5 * std::tanh(a / 2)) < 1e-14);
    }
}

TEST_CASE("laplacian of the distance function") {
    CHECK(std::fabs(laplacian_of_distance(1.0, Curvature(1.0)) - 1.3130352854993312) < 1e-15);
    CHECK(laplacian_of_distance(40.0, Curvature(1.0)) == doctest::Approx(1.0));
    CHECK(laplacian_of_distance(3.0, Curvature(2.0)) > 2.0);
    CHECK(laplacian_of_distance(2.0, Curvature(1.0)) < laplacian_of_distance(1.0, Curvature(1.0)));
    CHECK_THROWS_AS(laplacian_of_distance(0.0, Curvature(1.0)), DomainError);
}

TEST_CASE("decay rate") {
    CHECK(std::fabs(delta_rate(Curvature(1.0), 1.0) - std::sqrt(2.0) / 2) < 1e-15);
    CHECK(std::fabs(delta_rate(Curvature(1.0), 0.0) - 1.0) < 1e-15);
    CHECK(std::fabs(tau2_root(Curvature(1.0), 0.0) - 2.0) < 1e-15);
    std::uniform_real_distribution<double> ua(1e-2, 10.0), uv(0.0, 20.0);
    for (int q = 0; q < 1000; ++q) {
        double a = ua(rng), v = uv(rng);
        double d = delta_rate(Curvature(a), v), t = tau2_root(Curvature(a), v);
        CHECK(d > 0.0);
        CHECK(d < t);
        CHECK(barrier_quadratic(Curvature(a), v, d) < 0.0);
        CHECK(std::fabs(t * t + (v - a) * t - 2 * a * a) < 1e-10 * std::max(1.0, a * a + v * t));
    }
}

TEST_CASE("sup-norm estimate constants") {
    EstimateConstants c = estimate_constants(Curvature(1.0));
    CHECK(c.A1 == doctest::Approx(1.6959964460251637).epsilon(1e-14));
    CHECK(c.A2 == doctest::Approx(5.7564395631286996).epsilon(1e-14));
    CHECK(c.A3 == doctest::Approx(3.3170078513642026).epsilon(1e-14));
    EstimateConstants small = estimate_constants(Curvature(1e-3));
    CHECK(std::isfinite(small.A1));
    CHECK(std::isfinite(small.A2));
    CHECK(std::isfinite(small.A3));
    CHECK(small.A1 > 0);
    double prev = estimate_constants(Curvature(1.0)).A1;
    for (double a = 1.5; a < 20; a += 0.5) {
        double A1 = estimate_constants(Curvature(a)).A1;
        CHECK(A1 > prev);
        prev = A1;
    }
    EstimateConstants lg = log_estimate_constants(Curvature(1.0));
    CHECK(std::exp(lg.A2) == doctest::Approx(c.A2).epsilon(1e-13));
    EstimateConstantsExtended x = estimate_constants_extended(Curvature(2.0));
    EstimateConstants d = estimate_constants(Curvature(2.0));
    CHECK(static_cast<double>(x.A3) == doctest::Approx(d.A3).epsilon(1e-14));
    CHECK(std::isfinite(estimate_constants(Curvature(kEstimateOverflowA)).A2));
    CHECK(std::isinf(estimate_constants(Curvature(kEstimateOverflowA + 2.0)).A2));
    CHECK(std::isfinite(estimate_constants_extended(Curvature(300.0)).A2));
    CHECK(std::isfinite(log_estimate_constants(Curvature(1e4)).A2));
}

TEST_CASE("Poincare constant") {
    CHECK(poincare_constant(Curvature(1.0), 1.0, 2.0) == 580.0);
    CHECK(poincare_constant(Curvature(2.0), 1.0, 2.0) == 37.0);
    CHECK(poincare_constant(Curvature(1.5), 1.0, 1e6) == doctest::Approx(4.0 / 2.25));
    CHECK(poincare_constant(Curvature(1.0), 1.0, 3.0) < poincare_constant(Curvature(1.0), 1.0, 2.0));
    CHECK_THROWS_AS(poincare_constant(Curvature(1.0), 2.0, 2.0), DomainError);
    CHECK_THROWS_AS(poincare_constant(Curvature(1.0), 2.0, 1.0), DomainError);
}

TEST_CASE("amplitude of the vorticity bound") {
    CHECK(amplitude_A(Curvature(1.0), 1.0, 1.0, 0.0) == 0.0);
    CHECK(std::fabs(amplitude_A(Curvature(1.0), 1.0, 1.0, 1.0) - std::exp(1.0)) < 1e-15);
    double A = amplitude_A(Curvature(1.0), 0.7, 2.5, 0.3);
    CHECK(A * std::exp(-0.7 * 2.5) == doctest::Approx(0.3));
    RateConstants rc = rate_constants(Curvature(1.0), 1.0, 2.0, 0.1);
    CHECK(rc.delta == doctest::Approx(std::sqrt(0.5)));
    CHECK(rc.A == doctest::Approx(0.1 * std::exp(std::sqrt(0.5) * 2.0)));
}

TEST_CASE("hyperbolic trigonometric relations") {
    TrigIdentityReport r = trig_identity_suite();
    CHECK(r.pass);
    CHECK(r.max_identity_error < 1e-10);
    CHECK(r.min_relative_slack > 0.0);
    const double t = std::tanh(0.5), sh = std::sinh(1.0), ch = std::cosh(1.0);
    CHECK(std::fabs(1 + t * sh - 1.5430806348152437) < 1e-15);
    double slack = 2 * ch * ch - ((1 + t * t) * sh * sh + t * sh + 1);
    CHECK(slack == doctest::Approx(1.5430806348152438).epsilon(1e-13));
}

TEST_CASE("stable helpers") {
    CHECK(coth_stable(1.0) == doctest::Approx(1.3130352854993312));
    CHECK(coth_stable(1e-8) == doctest::Approx(1e8));
    CHECK(atanh_stable(0.5) == doctest::Approx(std::atanh(0.5)));
    CHECK(atanh_stable(1e-20) == 1e-20);
}
