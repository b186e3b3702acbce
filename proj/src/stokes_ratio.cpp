#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hypflow/harness.hpp"

namespace hypflow {

using nlohmann::json;

namespace {

using Coeffs = std::vector<std::vector<double>>;

/// Bivariate polynomial sum c[i][j] x^i y^j.
struct Poly2 {
    Coeffs c;

    double operator()(double x, double y) const {
        double total = 0.0, xp = 1.0;
        for (const auto& row : c) {
            double yp = 1.0, acc = 0.0;
            for (double cij : row) {
                acc += cij * yp;
                yp *= y;
            }
            total += acc * xp;
            xp *= x;
        }
        return total;
    }
    Poly2 dx() const {
        Poly2 d;
        for (std::size_t i = 1; i < c.size(); ++i) {
            d.c.push_back(c[i]);
            for (double& v : d.c.back()) v *= static_cast<double>(i);
        }
        if (d.c.empty()) d.c = {{0.0}};
        return d;
    }
    Poly2 dy() const {
        Poly2 d;
        for (const auto& row : c) {
            std::vector<double> r;
            for (std::size_t j = 1; j < row.size(); ++j) r.push_back(row[j] * static_cast<double>(j));
            if (r.empty()) r.push_back(0.0);
            d.c.push_back(r);
        }
        return d;
    }
    Poly2 operator+(const Poly2& o) const {
        Poly2 s;
        s.c.resize(std::max(c.size(), o.c.size()));
        for (std::size_t i = 0; i < s.c.size(); ++i) {
            std::size_t n1 = i < c.size() ? c[i].size() : 0, n2 = i < o.c.size() ? o.c[i].size() : 0;
            s.c[i].assign(std::max(n1, n2), 0.0);
            for (std::size_t j = 0; j < n1; ++j) s.c[i][j] += c[i][j];
            for (std::size_t j = 0; j < n2; ++j) s.c[i][j] += o.c[i][j];
        }
        return s;
    }
    Poly2 operator-() const {
        Poly2 s = *this;
        for (auto& row : s.c)
            for (double& v : row) v = -v;
        return s;
    }
};

/// The base profile: velocity, its gradient and the forcing, all polynomials.
struct Profile {
    Poly2 u1, u2, u1x, u1y, u2x, u2y, f1, f2;

    explicit Profile(const StokesInstance& inst) {
        Poly2 psi{inst.psi}, P{inst.P};
        u1 = psi.dy();
        u2 = -psi.dx();
        u1x = u1.dx();
        u1y = u1.dy();
        u2x = u2.dx();
        u2y = u2.dy();
        Poly2 lap1 = u1x.dx() + u1y.dy(), lap2 = u2x.dx() + u2y.dy();
        f1 = -lap1 + P.dx();
        f2 = -lap2 + P.dy();
    }
};

struct RadialRule {
    std::vector<double> x, w;  ///< nodes and weights on [0, 1]
};

RadialRule composite_gauss(int panels) {
    using Rule = boost::math::quadrature::gauss<double, 16>;
    const auto& absc = Rule::abscissa();
    const auto& wts = Rule::weights();
    RadialRule rule;
    for (int p = 0; p < panels; ++p) {
        double lo = static_cast<double>(p) / panels, half = 0.5 / panels, mid = lo + half;
        for (std::size_t q = 0; q < absc.size(); ++q) {
            if (absc[q] == 0.0) {
                rule.x.push_back(mid);
                rule.w.push_back(wts[q] * half);
                continue;
            }
            rule.x.push_back(mid - absc[q] * half);
            rule.w.push_back(wts[q] * half);
            rule.x.push_back(mid + absc[q] * half);
            rule.w.push_back(wts[q] * half);
        }
    }
    return rule;
}

}  // namespace

StokesInstance StokesInstance::random(std::uint64_t seed, int degree) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    StokesInstance inst;
    inst.psi.assign(degree + 1, std::vector<double>(degree + 1, 0.0));
    inst.P.assign(degree, std::vector<double>(degree, 0.0));
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j)
            if (i + j >= 1) inst.psi[i][j] = normal(rng);
    for (int i = 0; i < degree; ++i)
        for (int j = 0; i + j < degree; ++j) inst.P[i][j] = normal(rng);
    return inst;
}

StokesInstance StokesInstance::rescaled_to_unit() const {
    StokesInstance out = *this;
    out.amplitude = amplitude / (R * R);
    out.scale = scale / R;
    out.R = 1.0;
    return out;
}

StokesInstance StokesInstance::on_disk(double radius) const {
    StokesInstance out = *this;
    out.scale = scale * radius / R;
    out.R = radius;
    return out;
}

StokesRatio stokes_supnorm_ratio(const StokesInstance& inst, int radial_nodes, int angular_nodes) {
    const Profile prof(inst);
    const double A = inst.amplitude, S = inst.scale, R = inst.R;
    // u(y) = A u0(y/S), grad u = (A/S) grad u0, F = (A/S^2) F0.
    RadialRule rule = composite_gauss(std::max(1, radial_nodes / 16));
    double f43 = 0.0, u2 = 0.0, g2 = 0.0;
    const double dtheta = 2.0 * std::numbers::pi / angular_nodes;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        double r = rule.x[q] * R, wr = rule.w[q] * R * r * dtheta;
        for (int j = 0; j < angular_nodes; ++j) {
            double t = j * dtheta;
            double x = r * std::cos(t) / S, y = r * std::sin(t) / S;
            double a1 = prof.u1(x, y), a2 = prof.u2(x, y);
            double b11 = prof.u1x(x, y), b12 = prof.u1y(x, y), b21 = prof.u2x(x, y), b22 = prof.u2y(x, y);
            double c1 = prof.f1(x, y), c2 = prof.f2(x, y);
            double fn = (A / (S * S)) * std::hypot(c1, c2);
            f43 += wr * std::pow(fn, 4.0 / 3.0);
            u2 += wr * A * A * (a1 * a1 + a2 * a2);
            g2 += wr * (A / S) * (A / S) * (b11 * b11 + b12 * b12 + b21 * b21 + b22 * b22);
        }
    }
    StokesRatio out;
    // Sup on the half disk by sampling a polar lattice that scales with R.
    const int nr = radial_nodes * 2;
    for (int i = 0; i <= nr; ++i) {
        double r = 0.5 * R * i / nr;
        for (int j = 0; j < angular_nodes; ++j) {
            double t = j * dtheta;
            double x = r * std::cos(t) / S, y = r * std::sin(t) / S;
            out.sup_u = std::max(out.sup_u, A * std::hypot(prof.u1(x, y), prof.u2(x, y)));
        }
    }
    out.f_norm = std::pow(f43, 0.75);
    out.u_norm = std::sqrt(u2);
    out.grad_norm = std::sqrt(g2);
    double den = std::sqrt(R) * out.f_norm + out.u_norm / R + out.grad_norm;
    out.ratio = den > 0.0 ? out.sup_u / den : 0.0;
    return out;
}

json StokesReport::to_json() const {
    return {{"status", hypflow::to_string(status)},
            {"radii", radii},
            {"ratios", ratios},
            {"max_scaling_error", max_scaling_error},
            {"max_refinement_change", max_refinement_change},
            {"max_radius_spread", max_radius_spread},
            {"empirical_sup", empirical_sup}};
}

StokesReport check_stokes_supnorm_ratio(const std::vector<StokesInstance>& instances, const std::vector<double>& radii) {
    StokesReport rep;
    rep.radii = radii;
    bool any = false;
    for (const StokesInstance& base : instances) {
        double lo = INFINITY, hi = 0.0;
        for (double R : radii) {
            StokesInstance inst = base.on_disk(R);
            StokesRatio direct = stokes_supnorm_ratio(inst);
            StokesRatio unit = stokes_supnorm_ratio(inst.rescaled_to_unit());
            StokesRatio fine = stokes_supnorm_ratio(inst, 96, 192);
            rep.ratios.push_back(direct.ratio);
            if (direct.ratio > 0.0) {
                any = true;
                rep.max_scaling_error =
                    std::max(rep.max_scaling_error, std::fabs(direct.ratio - unit.ratio) / direct.ratio);
                rep.max_refinement_change =
                    std::max(rep.max_refinement_change, std::fabs(fine.ratio - direct.ratio) / direct.ratio);
            }
            lo = std::min(lo, direct.ratio);
            hi = std::max(hi, direct.ratio);
            rep.empirical_sup = std::max(rep.empirical_sup, direct.ratio);
        }
        if (hi > 0.0) rep.max_radius_spread = std::max(rep.max_radius_spread, (hi - lo) / hi);
    }
    if (!any)
        rep.status = CheckStatus::vacuous;
    else
        rep.status = (rep.max_scaling_error <= 1e-6 && rep.max_refinement_change <= 0.1 && rep.max_radius_spread <= 0.1)
                         ? CheckStatus::pass
                         : CheckStatus::fail;
    return rep;
}

}  // namespace hypflow
