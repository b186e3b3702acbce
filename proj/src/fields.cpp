#include "hypflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypflow/stencil.hpp"

namespace hypflow {

namespace {

void require_same(const GridPtr& g1, const GridPtr& g2) {
    if (!g1 || !g2 || !(g1 == g2 || same_grid(*g1, *g2))) throw DomainError("fields live on different grids");
}

void require_region(const PolarGrid& g, const Annulus& region) {
    if (!(region.rho_lo <= region.rho_hi) || !g.contains_rho(region.rho_lo) || !g.contains_rho(region.rho_hi))
        throw DomainError("annulus lies outside the grid");
}

std::vector<double> radial(const PolarGrid& g, const std::vector<double>& f, int order) {
    RadialStencils st(g.n_r(), g.h());
    const int nt = g.n_theta();
    std::vector<double> out(f.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.n_r(); ++i) {
        const auto& row = st.row(i);
        const auto& w = order == 1 ? row.d1 : row.d2;
        double* o = out.data() + g.idx(i, 0);
        for (std::size_t q = 0; q < w.size(); ++q) {
            const double* src = f.data() + g.idx(row.first + static_cast<int>(q), 0);
            for (int j = 0; j < nt; ++j) o[j] += w[q] * src[j];
        }
    }
    return out;
}

std::vector<double> angular(const PolarGrid& g, const std::vector<double>& f, int order) {
    PeriodicStencil st(g.k());
    const double* w = order == 1 ? st.d1 : st.d2;
    const int nt = g.n_theta();
    std::vector<double> out(f.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.n_r(); ++i) {
        const double* src = f.data() + g.idx(i, 0);
        double* o = out.data() + g.idx(i, 0);
        for (int j = 0; j < nt; ++j) {
            double acc = 0.0;
            for (int q = 0; q < 5; ++q) acc += w[q] * src[(j + q - 2 + nt) % nt];
            o[j] = acc;
        }
    }
    return out;
}

/// Ring integrand s_i * k * sum_j f_ij, integrated as a piecewise-linear function of rho.
double integrate_rings(const PolarGrid& g, const std::vector<double>& f, const Annulus& region) {
    require_region(g, region);
    const int nr = g.n_r(), nt = g.n_theta();
    std::vector<double> ring(nr, 0.0);
    for (int i = 0; i < nr; ++i) {
        double acc = 0.0;
        for (int j = 0; j < nt; ++j) acc += f[g.idx(i, j)];
        ring[i] = acc * g.s(i) * g.k();
    }
    double lo = std::max(region.rho_lo, g.rho_in());
    double hi = std::min(region.rho_hi, g.rho_out());
    double total = 0.0;
    for (int i = 0; i + 1 < nr; ++i) {
        double x0 = std::max(lo, g.rho(i)), x1 = std::min(hi, g.rho(i + 1));
        if (!(x1 > x0)) continue;
        double span = g.rho(i + 1) - g.rho(i);
        auto val = [&](double x) { return ring[i] + (ring[i + 1] - ring[i]) * (x - g.rho(i)) / span; };
        total += 0.5 * (x1 - x0) * (val(x0) + val(x1));
    }
    return total;
}

}  // namespace

ScalarField::ScalarField(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw DomainError("ScalarField: value count does not match grid");
}

OneFormField::OneFormField(GridPtr g) : grid(std::move(g)), v1(grid->size(), 0.0), v2(grid->size(), 0.0) {}

TwoTensorField::TwoTensorField(GridPtr g)
    : grid(std::move(g)), t11(grid->size(), 0.0), t12(grid->size(), 0.0), t21(grid->size(), 0.0),
      t22(grid->size(), 0.0) {}

ScalarField operator+(const ScalarField& f, const ScalarField& g) {
    require_same(f.grid, g.grid);
    ScalarField out(f.grid);
    for (std::size_t n = 0; n < f.size(); ++n) out.values[n] = f.values[n] + g.values[n];
    return out;
}

ScalarField operator-(const ScalarField& f, const ScalarField& g) {
    require_same(f.grid, g.grid);
    ScalarField out(f.grid);
    for (std::size_t n = 0; n < f.size(); ++n) out.values[n] = f.values[n] - g.values[n];
    return out;
}

ScalarField operator*(double c, const ScalarField& f) {
    ScalarField out(f.grid);
    for (std::size_t n = 0; n < f.size(); ++n) out.values[n] = c * f.values[n];
    return out;
}

OneFormField operator+(const OneFormField& u, const OneFormField& w) {
    require_same(u.grid, w.grid);
    OneFormField out(u.grid);
    for (std::size_t n = 0; n < u.v1.size(); ++n) {
        out.v1[n] = u.v1[n] + w.v1[n];
        out.v2[n] = u.v2[n] + w.v2[n];
    }
    return out;
}

OneFormField operator-(const OneFormField& u, const OneFormField& w) {
    return u + (-1.0) * w;
}

OneFormField operator*(double c, const OneFormField& u) {
    OneFormField out(u.grid);
    for (std::size_t n = 0; n < u.v1.size(); ++n) {
        out.v1[n] = c * u.v1[n];
        out.v2[n] = c * u.v2[n];
    }
    return out;
}

void require_finite(const ScalarField& f, const char* what) {
    for (double x : f.values)
        if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite value");
}

void require_finite(const OneFormField& v, const char* what) {
    for (std::size_t n = 0; n < v.v1.size(); ++n)
        if (!std::isfinite(v.v1[n]) || !std::isfinite(v.v2[n]))
            throw DomainError(std::string(what) + ": non-finite value");
}

ScalarField sample_polar(GridPtr g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int i = 0; i < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) out(i, j) = f(g->rho(i), g->theta(j));
    return out;
}

ScalarField sample_chart(GridPtr g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int i = 0; i < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) out(i, j) = f(g->y1(i, j), g->y2(i, j));
    return out;
}

OneFormField sample_form(GridPtr g, const std::function<std::array<double, 2>(double, double)>& f) {
    OneFormField out(g);
    for (int i = 0; i < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) {
            auto c = f(g->y1(i, j), g->y2(i, j));
            out.v1[g->idx(i, j)] = c[0];
            out.v2[g->idx(i, j)] = c[1];
        }
    return out;
}

std::vector<double> d_rho(const ScalarField& f) { return radial(*f.grid, f.values, 1); }
std::vector<double> d_rho2(const ScalarField& f) { return radial(*f.grid, f.values, 2); }
std::vector<double> d_theta(const ScalarField& f) { return angular(*f.grid, f.values, 1); }
std::vector<double> d_theta2(const ScalarField& f) { return angular(*f.grid, f.values, 2); }

OneFormField exterior_derivative(const ScalarField& F) {
    return from_polar_components(F.grid, d_rho(F), d_theta(F));
}

ScalarField partial1(const ScalarField& f) {
    OneFormField d = exterior_derivative(f);
    return ScalarField(f.grid, std::move(d.v1));
}

ScalarField partial2(const ScalarField& f) {
    OneFormField d = exterior_derivative(f);
    return ScalarField(f.grid, std::move(d.v2));
}

PolarComponents polar_components(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    PolarComponents pc{std::vector<double>(g.size()), std::vector<double>(g.size())};
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            double c = g.cos_t(j), s = g.sin_t(j);
            pc.u_rho[n] = (v.v1[n] * c + v.v2[n] * s) / g.lambda(i);
            pc.u_theta[n] = g.r(i) * (-v.v1[n] * s + v.v2[n] * c);
        }
    return pc;
}

OneFormField from_polar_components(GridPtr gp, const std::vector<double>& u_rho, const std::vector<double>& u_theta) {
    const PolarGrid& g = *gp;
    OneFormField v(gp);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            double c = g.cos_t(j), s = g.sin_t(j);
            double ur = g.lambda(i) * u_rho[n];
            double ut = u_theta[n] / g.r(i);
            v.v1[n] = ur * c - ut * s;
            v.v2[n] = ur * s + ut * c;
        }
    return v;
}

TwoTensorField covariant_gradient(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    ScalarField u1(v.grid, v.v1), u2(v.grid, v.v2);
    OneFormField du1 = exterior_derivative(u1);
    OneFormField du2 = exterior_derivative(u2);
    TwoTensorField T(v.grid);
    for (int i = 0; i < g.n_r(); ++i) {
        double w = 2.0 / (1.0 - g.r(i) * g.r(i));
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            double p1 = w * g.y1(i, j), p2 = w * g.y2(i, j);
            double a = v.v1[n], b = v.v2[n];
            double dot = a * p1 + b * p2;
            T.t11[n] = du1.v1[n] - (2.0 * a * p1 - dot);
            T.t12[n] = du2.v1[n] - (a * p2 + b * p1);
            T.t21[n] = du1.v2[n] - (b * p1 + a * p2);
            T.t22[n] = du2.v2[n] - (2.0 * b * p2 - dot);
        }
    }
    return T;
}

ScalarField hyperbolic_norm_form(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    ScalarField out(v.grid);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.values[n] = std::hypot(v.v1[n], v.v2[n]) / g.lambda(i);
        }
    return out;
}

ScalarField hyperbolic_norm_tensor(const TwoTensorField& T) {
    const PolarGrid& g = *T.grid;
    ScalarField out(T.grid);
    for (int i = 0; i < g.n_r(); ++i) {
        double w = 1.0 / (g.lambda(i) * g.lambda(i));
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            // Nested hypot keeps tiny bump tails from underflowing to zero.
            out.values[n] = w * std::hypot(std::hypot(T.t11[n], T.t12[n]), std::hypot(T.t21[n], T.t22[n]));
        }
    }
    return out;
}

ScalarField antisymmetric_part_norm(const TwoTensorField& T) {
    const PolarGrid& g = *T.grid;
    ScalarField out(T.grid);
    for (int i = 0; i < g.n_r(); ++i) {
        double w = 1.0 / (g.lambda(i) * g.lambda(i));
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.values[n] = w * std::fabs(T.t12[n] - T.t21[n]) / std::numbers::sqrt2;
        }
    }
    return out;
}

ScalarField vorticity(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    PolarComponents pc = polar_components(v);
    auto dut = radial(g, pc.u_theta, 1);
    auto dur = angular(g, pc.u_rho, 1);
    ScalarField out(v.grid);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.values[n] = (dut[n] - dur[n]) / g.s(i);
        }
    return out;
}

ScalarField divergence(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    PolarComponents pc = polar_components(v);
    std::vector<double> flux(g.size());
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) flux[g.idx(i, j)] = g.s(i) * pc.u_rho[g.idx(i, j)];
    auto dflux = radial(g, flux, 1);
    auto dut = angular(g, pc.u_theta, 1);
    ScalarField out(v.grid);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.values[n] = -(dflux[n] / g.s(i) + dut[n] / (g.s(i) * g.s(i)));
        }
    return out;
}

ScalarField laplace_beltrami(const ScalarField& f) {
    const PolarGrid& g = *f.grid;
    auto fr = radial(g, f.values, 1);
    auto frr = radial(g, f.values, 2);
    auto ftt = angular(g, f.values, 2);
    ScalarField out(f.grid);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.values[n] = frr[n] + g.dlog_s(i) * fr[n] + ftt[n] / (g.s(i) * g.s(i));
        }
    return out;
}

OneFormField streamfunction_to_velocity(const ScalarField& psi, double circulation) {
    const PolarGrid& g = *psi.grid;
    auto pr = radial(g, psi.values, 1);
    auto pt = angular(g, psi.values, 1);
    double c = circulation / (2.0 * std::numbers::pi);
    std::vector<double> u_rho(g.size()), u_theta(g.size());
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            u_rho[n] = pt[n] / g.s(i);
            u_theta[n] = -g.s(i) * pr[n] + c;
        }
    return from_polar_components(psi.grid, u_rho, u_theta);
}

Annulus Annulus::from_chart_radii(double r_lo, double r_hi, Curvature a) {
    return {rho_of_r(r_lo, a), rho_of_r(r_hi, a)};
}

double integrate(const ScalarField& f, const Annulus& region) {
    return integrate_rings(*f.grid, f.values, region);
}

double integrate(const ScalarField& f) { return integrate(f, Annulus::whole(*f.grid)); }

namespace {
double lp_of_norms(const ScalarField& norms, double p, const Annulus& region) {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be at least 1");
    ScalarField powed(norms.grid);
    for (std::size_t n = 0; n < norms.size(); ++n) powed.values[n] = std::pow(std::fabs(norms.values[n]), p);
    return std::pow(std::max(0.0, integrate(powed, region)), 1.0 / p);
}
}  // namespace

double lp_norm(const ScalarField& f, double p, const Annulus& region) { return lp_of_norms(f, p, region); }
double lp_norm(const OneFormField& v, double p, const Annulus& region) {
    return lp_of_norms(hyperbolic_norm_form(v), p, region);
}
double lp_norm(const TwoTensorField& T, double p, const Annulus& region) {
    return lp_of_norms(hyperbolic_norm_tensor(T), p, region);
}

namespace {
struct CircleWeights {
    int i;
    double t;
    double r;
};
CircleWeights circle_weights(const PolarGrid& g, double rho) {
    if (!g.contains_rho(rho)) throw DomainError("sup_on_circle: radius outside grid");
    int i = g.ring_below(rho);
    double r = std::tanh(0.5 * g.a() * rho);
    double t = std::clamp((r - g.r(i)) / (g.r(i + 1) - g.r(i)), 0.0, 1.0);
    return {i, t, r};
}
}  // namespace

double sup_on_circle(const ScalarField& f, double rho) {
    const PolarGrid& g = *f.grid;
    CircleWeights cw = circle_weights(g, rho);
    double best = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) {
        double val = (1.0 - cw.t) * f(cw.i, j) + cw.t * f(cw.i + 1, j);
        best = std::max(best, std::fabs(val));
    }
    return best;
}

double sup_on_circle(const OneFormField& v, double rho) {
    const PolarGrid& g = *v.grid;
    CircleWeights cw = circle_weights(g, rho);
    double lam = conformal_factor_r(cw.r, g.curvature());
    double best = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) {
        std::size_t n0 = g.idx(cw.i, j), n1 = g.idx(cw.i + 1, j);
        double a = (1.0 - cw.t) * v.v1[n0] + cw.t * v.v1[n1];
        double b = (1.0 - cw.t) * v.v2[n0] + cw.t * v.v2[n1];
        best = std::max(best, std::hypot(a, b) / lam);
    }
    return best;
}

double sup_in(const ScalarField& f, const Annulus& region) {
    const PolarGrid& g = *f.grid;
    double best = 0.0;
    for (int i = 0; i < g.n_r(); ++i) {
        if (g.rho(i) < region.rho_lo || g.rho(i) > region.rho_hi) continue;
        for (int j = 0; j < g.n_theta(); ++j) best = std::max(best, std::fabs(f(i, j)));
    }
    return best;
}

ScalarField pointwise_square(const ScalarField& f) { return pointwise_product(f, f); }

ScalarField pointwise_product(const ScalarField& f, const ScalarField& g) {
    require_same(f.grid, g.grid);
    ScalarField out(f.grid);
    for (std::size_t n = 0; n < f.size(); ++n) out.values[n] = f.values[n] * g.values[n];
    return out;
}

}  // namespace hypflow
