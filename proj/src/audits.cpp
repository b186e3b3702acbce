#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hypflow/harness.hpp"

namespace hypflow {

using nlohmann::json;

json AuditReport::to_json() const {
    return {{"name", name},       {"samples", samples}, {"violations", violations}, {"vacuous", vacuous},
            {"worst_ratio", worst_ratio}, {"seed", seed}, {"pass", pass()},       {"details", details}};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Independent stream per sample so that audits are reproducible one sample at a time.
std::mt19937_64 sample_rng(std::uint64_t seed, int sample) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(sample)};
    return std::mt19937_64(seq);
}

/// Geodesic distance between points given in geodesic polar coordinates.
double polar_distance(double a, double rho1, double th1, double rho2, double th2) {
    double c = std::cosh(a * rho1) * std::cosh(a * rho2) - std::sinh(a * rho1) * std::sinh(a * rho2) * std::cos(th1 - th2);
    return std::acosh(std::max(1.0, c)) / a;
}

int next_pow2(int n) {
    int p = 16;
    while (p < n) p *= 2;
    return p;
}

}  // namespace

OneFormField random_bump_flow(GridPtr grid, double rho_lo, double rho_hi, std::uint64_t seed) {
    const double a = grid->a();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int bumps = 1 + static_cast<int>(uni(rng) * 3);
    struct Bump {
        double rho, theta, sigma, amp;
    };
    std::vector<Bump> list;
    const double width = rho_hi - rho_lo;
    for (int b = 0; b < bumps; ++b) {
        double sigma = (0.04 + 0.08 * uni(rng)) * width;
        double lo = rho_lo + 5.0 * sigma, hi = rho_hi - 5.0 * sigma;
        double rho = lo + (hi - lo) * uni(rng);
        list.push_back({rho, kTwoPi * uni(rng), sigma, normal(rng)});
    }
    ScalarField psi = sample_polar(grid, [&](double rho, double th) {
        double v = 0.0;
        for (const Bump& b : list) {
            double d = polar_distance(a, rho, th, b.rho, b.theta) / b.sigma;
            v += b.amp * std::exp(-0.5 * d * d);
        }
        return v;
    });
    return streamfunction_to_velocity(psi, 0.0);
}

AuditReport audit_chart_gradient(double a, int samples, std::uint64_t seed, int n) {
    AuditReport rep;
    rep.name = "chart_gradient";
    rep.seed = seed;
    rep.samples = samples;
    const Curvature ca(a);
    GridPtr grid = PolarGrid::geodesic(a, 1e-3, 1.0, n, next_pow2(n));
    const PolarGrid& g = *grid;
    const double r_ball = ball_radius_in_chart(1.0, ca), r_hole = g.r_in();
    const double c2 = std::cosh(0.5 * a), k1 = 32.0 * c2 * c2 * c2 * c2 / (a * a), k2 = 32.0 * std::sinh(a) * std::sinh(a);
    double min_slack = INFINITY;
    for (int q = 0; q < samples; ++q) {
        std::mt19937_64 rng = sample_rng(seed, q);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        // Compactly supported bump inside the chart ball, clear of the tiny hole.
        double w = (0.15 + 0.3 * uni(rng)) * r_ball;
        double cr = r_hole + w + (r_ball - 2.0 * w - r_hole) * uni(rng) * 0.95;
        double ct = kTwoPi * uni(rng);
        double cx = cr * std::cos(ct), cy = cr * std::sin(ct);
        double coef[2][3];
        for (auto& row : coef)
            for (double& c : row) c = normal(rng);
        auto bump = [&](double y1, double y2) {
            double d2 = ((y1 - cx) * (y1 - cx) + (y2 - cy) * (y2 - cy)) / (w * w);
            return d2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - d2)) : 0.0;
        };
        OneFormField u = sample_form(grid, [&](double y1, double y2) {
            double b = bump(y1, y2);
            return std::array<double, 2>{b * (coef[0][0] + coef[0][1] * y1 + coef[0][2] * y2),
                                         b * (coef[1][0] + coef[1][1] * y1 + coef[1][2] * y2)};
        });
        ScalarField u1(grid, u.v1), u2(grid, u.v2);
        ScalarField d11 = partial1(u1), d21 = partial2(u1), d12 = partial1(u2), d22 = partial2(u2);
        ScalarField euclid(grid);
        for (int i = 0; i < g.n_r(); ++i) {
            double inv = 1.0 / (g.lambda(i) * g.lambda(i));
            for (int j = 0; j < g.n_theta(); ++j) {
                std::size_t p = g.idx(i, j);
                euclid.values[p] = inv * (d11.values[p] * d11.values[p] + d21.values[p] * d21.values[p] +
                                          d12.values[p] * d12.values[p] + d22.values[p] * d22.values[p]);
            }
        }
        double lhs = integrate(euclid);
        double grad = integrate(pointwise_square(hyperbolic_norm_tensor(covariant_gradient(u))));
        double mass = integrate(pointwise_square(hyperbolic_norm_form(u)));
        double rhs = k1 * grad + k2 * mass;
        if (lhs < kVacuousLevel && rhs < kVacuousLevel) {
            ++rep.vacuous;
            continue;
        }
        double ratio = lhs / rhs;
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        min_slack = std::min(min_slack, 1.0 - ratio);
        if (!(lhs <= rhs)) ++rep.violations;
    }
    rep.details = {{"a", a}, {"n_r", n}, {"min_slack", min_slack}};
    return rep;
}

AuditReport audit_poincare(double a, int samples, std::uint64_t seed, int n) {
    AuditReport rep;
    rep.name = "poincare";
    rep.seed = seed;
    rep.samples = samples;
    const double R0 = 1.0, R_out = R0 + 6.0 / a;
    GridPtr grid = PolarGrid::geodesic(a, R0, R_out, n, next_pow2(n));
    for (int q = 0; q < samples; ++q) {
        std::mt19937_64 rng = sample_rng(seed, q);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double R1 = R0 + (0.25 + 2.75 * uni(rng)) / a;
        OneFormField v = random_bump_flow(grid, R0, R_out, rng());
        InequalityReport r = check_poincare(v, a, R0, R1);
        if (r.status == CheckStatus::vacuous) {
            ++rep.vacuous;
            continue;
        }
        rep.worst_ratio = std::max(rep.worst_ratio, r.ratio);
        if (r.status == CheckStatus::fail) ++rep.violations;
    }
    rep.details = {{"a", a}, {"R0", R0}, {"R_out", R_out}, {"n", n}};
    return rep;
}

AuditReport audit_h1_vorticity(const std::vector<double>& curvatures, int samples, std::uint64_t seed, int n_r,
                               int n_theta) {
    AuditReport rep;
    rep.name = "h1_vorticity";
    rep.seed = seed;
    rep.samples = samples;
    int unconverged = 0, poincare_violations = 0;
    double worst_poincare = 0.0;
    for (int q = 0; q < samples; ++q) {
        std::mt19937_64 rng = sample_rng(seed, q);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        const double a = curvatures[static_cast<std::size_t>(q) % curvatures.size()];
        SolverConfig cfg;
        cfg.a = a;
        cfg.R0 = 1.0;
        cfg.R_out = cfg.R0 + std::max(3.0, 6.0 / a);
        cfg.n_r = n_r;
        cfg.n_theta = n_theta;
        cfg.R1 = cfg.R0 + 1.0 / a;
        cfg.tol = 1e-8;
        cfg.max_iters = 400;
        cfg.parallel = false;
        std::vector<double> coef(7);
        for (double& c : coef) c = 0.3 * a * uni(rng);
        cfg.wall_data.assign(n_theta, 0.0);
        for (int j = 0; j < n_theta; ++j) {
            double t = 2.0 * std::numbers::pi * j / n_theta;
            double v = coef[0];
            for (int m = 1; m <= 3; ++m) v += coef[2 * m - 1] * std::cos(m * t) + coef[2 * m] * std::sin(m * t);
            cfg.wall_data[j] = v;
        }
        SolveResult res = picard_solve(cfg);
        if (!res.report.converged) ++unconverged;
        CutoffSpec cut{cfg.R0, cfg.R1};
        InequalityReport h1 = check_h1_vorticity(res.state, cfg.R0, cfg.R1, cut);
        if (h1.status == CheckStatus::vacuous)
            ++rep.vacuous;
        else {
            rep.worst_ratio = std::max(rep.worst_ratio, h1.ratio);
            if (h1.status == CheckStatus::fail) ++rep.violations;
        }
        InequalityReport pc = check_poincare(res.state.v, a, cfg.R0, cfg.R1);
        if (pc.status != CheckStatus::vacuous) worst_poincare = std::max(worst_poincare, pc.ratio);
        if (pc.status == CheckStatus::fail) {
            ++poincare_violations;
            ++rep.violations;
        }
    }
    rep.details = {{"curvatures", curvatures},        {"n_r", n_r},
                   {"n_theta", n_theta},              {"unconverged", unconverged},
                   {"poincare_violations", poincare_violations}, {"worst_poincare_ratio", worst_poincare}};
    return rep;
}

AuditReport audit_pointwise_curl(double a, int samples, std::uint64_t seed, int n) {
    AuditReport rep;
    rep.name = "pointwise_curl";
    rep.seed = seed;
    rep.samples = samples;
    GridPtr grid = PolarGrid::geodesic(a, 0.5, 0.5 + 6.0 / a, n, next_pow2(n));
    long nodes = 0;
    for (int q = 0; q < samples; ++q) {
        std::mt19937_64 rng = sample_rng(seed, q);
        std::normal_distribution<double> normal(0.0, 1.0);
        // A divergence-free part plus a smooth gradient-like part, so the field is generic.
        OneFormField v = random_bump_flow(grid, grid->rho_in(), grid->rho_out(), rng());
        double c[4];
        for (double& x : c) x = normal(rng);
        OneFormField w = sample_form(grid, [&](double y1, double y2) {
            return std::array<double, 2>{c[0] + c[1] * y2 * y2, c[2] + c[3] * y1 * y2};
        });
        TwoTensorField T = covariant_gradient(v + w);
        ScalarField curl = antisymmetric_part_norm(T), full = hyperbolic_norm_tensor(T);
        bool bad = false;
        for (std::size_t p = 0; p < curl.size(); ++p) {
            ++nodes;
            if (full.values[p] == 0.0) continue;
            double r = curl.values[p] / full.values[p];
            rep.worst_ratio = std::max(rep.worst_ratio, r);
            if (curl.values[p] > full.values[p] * (1.0 + 1e-12)) bad = true;
        }
        if (bad) ++rep.violations;
    }
    rep.details = {{"a", a}, {"nodes", nodes}};
    return rep;
}

AuditReport audit_ladyzhenskaya(double a, int samples, std::uint64_t seed, int n) {
    AuditReport rep;
    rep.name = "ladyzhenskaya";
    rep.seed = seed;
    rep.samples = samples;
    const double R0 = 0.5, R_out = R0 + 6.0 / a;
    double worst[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
        int m = n << level;
        GridPtr grid = PolarGrid::geodesic(a, R0, R_out, m, next_pow2(m));
        Annulus all = Annulus::whole(*grid);
        for (int q = 0; q < samples; ++q) {
            std::mt19937_64 rng = sample_rng(seed, q);
            OneFormField w = random_bump_flow(grid, R0, R_out, rng());
            double l4 = lp_norm(w, 4.0, all), l2 = lp_norm(w, 2.0, all);
            double g2 = lp_norm(covariant_gradient(w), 2.0, all);
            double den = l2 + g2;
            if (den < kVacuousLevel) {
                if (level == 0) ++rep.vacuous;
                continue;
            }
            double r = l4 / den;
            if (!std::isfinite(r) && level == 0) ++rep.violations;
            worst[level] = std::max(worst[level], r);
        }
    }
    double change = worst[0] > 0 ? std::fabs(worst[1] - worst[0]) / worst[0] : 0.0;
    if (change > 0.1) ++rep.violations;
    rep.worst_ratio = worst[1];
    rep.details = {{"a", a}, {"max_ratio_coarse", worst[0]}, {"max_ratio_fine", worst[1]}, {"refinement_change", change}};
    return rep;
}

}  // namespace hypflow
