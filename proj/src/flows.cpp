#include "hypflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "hypflow/elliptic.hpp"

namespace hypflow {

BoundaryTrace::BoundaryTrace(std::vector<double> c, std::vector<double> s) : cos_(std::move(c)), sin_(std::move(s)) {
    std::size_t len = std::max<std::size_t>({cos_.size(), sin_.size(), 1});
    cos_.resize(len, 0.0);
    sin_.resize(len, 0.0);
    sin_[0] = 0.0;
    for (std::size_t n = 0; n < cos_.size(); ++n)
        if (!std::isfinite(cos_[n]) || !std::isfinite(sin_[n])) throw DomainError("BoundaryTrace: non-finite data");
    const int m = std::max<int>(1024, 8 * static_cast<int>(cos_.size()));
    max_ = -INFINITY;
    min_ = INFINITY;
    for (int q = 0; q < m; ++q) {
        double v = (*this)(2.0 * std::numbers::pi * q / m);
        max_ = std::max(max_, v);
        min_ = std::min(min_, v);
    }
}

BoundaryTrace BoundaryTrace::from_samples(const std::vector<double>& samples) {
    const int N = static_cast<int>(samples.size());
    if (N == 0) throw DomainError("BoundaryTrace: no samples");
    for (double x : samples)
        if (!std::isfinite(x)) throw DomainError("BoundaryTrace: non-finite sample");
    const int half = N / 2;
    std::vector<double> c(half + 1, 0.0), s(half + 1, 0.0);
    for (int n = 0; n <= half; ++n) {
        double ac = 0.0, as = 0.0;
        for (int j = 0; j < N; ++j) {
            double t = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(n) * j) % N) / N;
            ac += samples[j] * std::cos(t);
            as += samples[j] * std::sin(t);
        }
        bool edge = (n == 0) || (N % 2 == 0 && n == half);
        c[n] = (edge ? 1.0 : 2.0) * ac / N;
        s[n] = (edge ? 0.0 : 2.0 * as / N);
    }
    return BoundaryTrace(std::move(c), std::move(s));
}

BoundaryTrace BoundaryTrace::from_fourier(std::vector<double> cos_coef, std::vector<double> sin_coef) {
    std::size_t n = std::max(cos_coef.size(), sin_coef.size());
    cos_coef.resize(std::max<std::size_t>(n, 1), 0.0);
    sin_coef.resize(cos_coef.size(), 0.0);
    return BoundaryTrace(std::move(cos_coef), std::move(sin_coef));
}

BoundaryTrace BoundaryTrace::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("BoundaryTrace: invalid JSON: ") + e.what());
    }
    std::string kind = j.value("kind", "");
    try {
        if (kind == "samples") return from_samples(j.at("values").get<std::vector<double>>());
        if (kind == "fourier")
            return from_fourier(j.value("cos", std::vector<double>{}), j.value("sin", std::vector<double>{}));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("BoundaryTrace: malformed data: ") + e.what());
    }
    throw DomainError("BoundaryTrace: kind must be \"samples\" or \"fourier\"");
}

BoundaryTrace BoundaryTrace::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("BoundaryTrace: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string BoundaryTrace::to_json() const {
    nlohmann::json j = {{"kind", "fourier"}, {"cos", cos_}, {"sin", sin_}};
    return j.dump();
}

double BoundaryTrace::operator()(double theta) const {
    double acc = cos_[0];
    for (std::size_t n = 1; n < cos_.size(); ++n) {
        double t = static_cast<double>(n) * theta;
        acc += cos_[n] * std::cos(t) + sin_[n] * std::sin(t);
    }
    return acc;
}

BoundaryTrace BoundaryTrace::scaled(double c) const {
    std::vector<double> cc(cos_), ss(sin_);
    for (auto& x : cc) x *= c;
    for (auto& x : ss) x *= c;
    return BoundaryTrace(std::move(cc), std::move(ss));
}

ScalarField poisson_harmonic(const BoundaryTrace& phi, GridPtr grid) {
    const PolarGrid& g = *grid;
    const int deg = phi.degree(), nt = g.n_theta();
    std::vector<double> ct(static_cast<std::size_t>(deg + 1) * nt), st(ct.size());
    for (int n = 0; n <= deg; ++n)
        for (int j = 0; j < nt; ++j) {
            double t = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(n) * j) % nt) / nt;
            ct[static_cast<std::size_t>(n) * nt + j] = std::cos(t);
            st[static_cast<std::size_t>(n) * nt + j] = std::sin(t);
        }
    ScalarField F(grid);
    const auto& c = phi.cos_coef();
    const auto& s = phi.sin_coef();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.n_r(); ++i) {
        for (int j = 0; j < nt; ++j) {
            double acc = c[0], rn = 1.0;
            for (int n = 1; n <= deg; ++n) {
                rn *= g.r(i);
                acc += rn * (c[n] * ct[static_cast<std::size_t>(n) * nt + j] + s[n] * st[static_cast<std::size_t>(n) * nt + j]);
            }
            F.values[g.idx(i, j)] = acc;
        }
    }
    return F;
}

FlowState potential_flow(const ScalarField& F, double a, double harmonic_tol) {
    const PolarGrid& g = *F.grid;
    if (std::fabs(a - g.a()) > 1e-14 * a) throw DomainError("potential_flow: curvature does not match grid");
    require_finite(F, "potential_flow");
    double fsup = 0.0;
    for (double x : F.values) fsup = std::max(fsup, std::fabs(x));
    ScalarField lap = laplace_beltrami(F);
    double lsup = 0.0;
    for (double x : lap.values) lsup = std::max(lsup, std::fabs(x));
    if (lsup > 10.0 * harmonic_tol * std::max(fsup, 1e-300) && lsup > 1e-300)
        throw DomainError("potential_flow: F is not harmonic");

    FlowState st;
    st.a = a;
    st.v = exterior_derivative(F);
    st.omega = vorticity(st.v);
    ScalarField nrm = hyperbolic_norm_form(st.v);
    st.P = ScalarField(F.grid);
    for (std::size_t n = 0; n < F.size(); ++n)
        st.P.values[n] = -2.0 * a * a * F.values[n] - 0.5 * nrm.values[n] * nrm.values[n];
    st.circulation = 0.0;
    return st;
}

FlowState potential_flow(const BoundaryTrace& phi, GridPtr grid) {
    const PolarGrid& g = *grid;
    const double a = g.a();
    const int deg = phi.degree();
    const auto& c = phi.cos_coef();
    const auto& s = phi.sin_coef();
    FlowState st;
    st.a = a;
    st.v = OneFormField(grid);
    st.P = ScalarField(grid);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.n_r(); ++i) {
        const double r = g.r(i), lam = g.lambda(i);
        for (int j = 0; j < g.n_theta(); ++j) {
            const double t = g.theta(j), ct = g.cos_t(j), sn = g.sin_t(j);
            // F = sum r^n (c_n cos n t + s_n sin n t); Fr = dF/dr, Ft = (1/r) dF/dt.
            double f = c[0], fr = 0.0, ft = 0.0, rn1 = 1.0;
            for (int n = 1; n <= deg; ++n) {
                const double cn = std::cos(n * t), sn_ = std::sin(n * t);
                fr += n * rn1 * (c[n] * cn + s[n] * sn_);
                ft += n * rn1 * (-c[n] * sn_ + s[n] * cn);
                rn1 *= r;
                f += rn1 * (c[n] * cn + s[n] * sn_);
            }
            const std::size_t q = g.idx(i, j);
            const double v1 = fr * ct - ft * sn, v2 = fr * sn + ft * ct;
            st.v.v1[q] = v1;
            st.v.v2[q] = v2;
            const double speed2 = (v1 * v1 + v2 * v2) / (lam * lam);
            st.P.values[q] = -2.0 * a * a * f - 0.5 * speed2;
        }
    }
    st.omega = vorticity(st.v);
    st.circulation = 0.0;
    return st;
}

OneFormField advection(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    TwoTensorField T = covariant_gradient(v);
    OneFormField out(v.grid);
    for (int i = 0; i < g.n_r(); ++i) {
        double w = 1.0 / (g.lambda(i) * g.lambda(i));
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.v1[n] = w * (v.v1[n] * T.t11[n] + v.v2[n] * T.t21[n]);
            out.v2[n] = w * (v.v1[n] * T.t12[n] + v.v2[n] * T.t22[n]);
        }
    }
    return out;
}

OneFormField viscous_term(const OneFormField& v) {
    const PolarGrid& g = *v.grid;
    const double a2 = g.a() * g.a();
    ScalarField om = vorticity(v);
    ScalarField lb1 = laplace_beltrami(ScalarField(v.grid, v.v1));
    ScalarField lb2 = laplace_beltrami(ScalarField(v.grid, v.v2));
    OneFormField out(v.grid);
    for (int i = 0; i < g.n_r(); ++i) {
        double w = 4.0 / (1.0 - g.r(i) * g.r(i));
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t n = g.idx(i, j);
            out.v1[n] = -lb1.values[n] - w * g.y2(i, j) * om.values[n] + 2.0 * a2 * v.v1[n];
            out.v2[n] = -lb2.values[n] + w * g.y1(i, j) * om.values[n] + 2.0 * a2 * v.v2[n];
        }
    }
    return out;
}

NSResidual ns_residual(const FlowState& s) {
    NSResidual res;
    OneFormField dP = exterior_derivative(s.P);
    res.momentum = viscous_term(s.v) + advection(s.v) + dP;
    res.mass = divergence(s.v);
    res.momentum_norm = hyperbolic_norm_form(res.momentum);
    for (double x : res.momentum_norm.values) res.momentum_sup = std::max(res.momentum_sup, x);
    for (double x : res.mass.values) res.mass_sup = std::max(res.mass_sup, std::fabs(x));
    return res;
}

ScalarField recover_pressure(const OneFormField& v, double a) {
    const PolarGrid& g = *v.grid;
    if (std::fabs(a - g.a()) > 1e-14 * a) throw DomainError("recover_pressure: curvature does not match grid");
    const int nr = g.n_r(), nt = g.n_theta();
    const double h = g.h(), k = g.k();

    OneFormField M = viscous_term(v) + advection(v);
    PolarComponents mp = polar_components(M);
    // Tangential part per unit length: M_theta / s.
    std::vector<double> mt(g.size());
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) mt[g.idx(i, j)] = mp.u_theta[g.idx(i, j)] / g.s(i);

    RadialSpectralOperator A(nr, nt);
    A.dirichlet_inner = false;
    A.dirichlet_outer = false;
    A.pin_mean = true;
    std::vector<double> b(g.size(), 0.0);
    for (int i = 0; i < nr; ++i) {
        double si = g.s(i);
        double width = (i == 0 || i == nr - 1) ? 0.5 * h : h;
        double sp = i < nr - 1 ? face_s(g, i, +1) : 0.0;
        double sm = i > 0 ? face_s(g, i, -1) : 0.0;
        A.upper[i] = sp / (h * width * si);
        A.lower[i] = sm / (h * width * si);
        A.diag[i] = -(A.upper[i] + A.lower[i]);
        A.angular[i] = 1.0 / (si * si * k * k);
        for (int j = 0; j < nt; ++j) {
            int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
            double flux_out = 0.0, flux_in = 0.0;
            if (i < nr - 1) flux_out = sp * 0.5 * (mp.u_rho[g.idx(i, j)] + mp.u_rho[g.idx(i + 1, j)]);
            if (i > 0) flux_in = sm * 0.5 * (mp.u_rho[g.idx(i, j)] + mp.u_rho[g.idx(i - 1, j)]);
            double tp = 0.5 * (mt[g.idx(i, j)] + mt[g.idx(i, jp)]);
            double tm = 0.5 * (mt[g.idx(i, j)] + mt[g.idx(i, jm)]);
            b[g.idx(i, j)] = -(flux_out - flux_in) / (width * si) - (tp - tm) / (k * si);
        }
    }
    return ScalarField(v.grid, fft_solve(A, b));
}

std::vector<double> ray_values(const ScalarField& f, double theta) {
    const PolarGrid& g = *f.grid;
    const int nt = g.n_theta();
    double t = theta / g.k();
    t -= nt * std::floor(t / nt);
    std::vector<double> out(g.n_r());
    double nearest = std::round(t);
    if (std::fabs(t - nearest) < 1e-9) {
        int j = static_cast<int>(nearest) % nt;
        for (int i = 0; i < g.n_r(); ++i) out[i] = f(i, j);
        return out;
    }
    int j0 = static_cast<int>(std::floor(t));
    double u = t - j0;
    // Cubic Lagrange through j0-1 .. j0+2.
    double w[4] = {-u * (u - 1) * (u - 2) / 6.0, (u + 1) * (u - 1) * (u - 2) / 2.0, -(u + 1) * u * (u - 2) / 2.0,
                   (u + 1) * u * (u - 1) / 6.0};
    for (int i = 0; i < g.n_r(); ++i) {
        double acc = 0.0;
        for (int q = 0; q < 4; ++q) acc += w[q] * f(i, ((j0 - 1 + q) % nt + nt) % nt);
        out[i] = acc;
    }
    return out;
}

RayLimits pressure_ray_limits(const ScalarField& P, const std::vector<double>& directions, double rho_lo,
                              double rho_hi) {
    const PolarGrid& g = *P.grid;
    if (!(rho_lo < rho_hi) || !g.contains_rho(rho_lo) || !g.contains_rho(rho_hi))
        throw DomainError("pressure_ray_limits: window outside grid");
    std::vector<int> rings;
    for (int i = 0; i < g.n_r(); ++i)
        if (g.rho(i) >= rho_lo - 1e-12 && g.rho(i) <= rho_hi + 1e-12) rings.push_back(i);
    if (rings.size() < 3) throw DomainError("pressure_ray_limits: window narrower than 3 rings");

    RayLimits out;
    out.directions = directions;
    out.rho_lo = rho_lo;
    out.rho_hi = rho_hi;
    out.rings_used = static_cast<int>(rings.size());
    for (double th : directions) {
        auto vals = ray_values(P, th);
        // Basis 1 and e = exp(-a (rho - rho_lo)); 2x2 normal equations.
        double s11 = 0, s1e = 0, see = 0, s1p = 0, sep = 0;
        for (int i : rings) {
            double e = std::exp(-g.a() * (g.rho(i) - rho_lo));
            s11 += 1.0;
            s1e += e;
            see += e * e;
            s1p += vals[i];
            sep += e * vals[i];
        }
        double det = s11 * see - s1e * s1e;
        double L = (see * s1p - s1e * sep) / det;
        double c = (s11 * sep - s1e * s1p) / det;
        out.limits.push_back(L);
        out.amplitudes.push_back(c * std::exp(g.a() * rho_lo));
    }
    if (!out.limits.empty()) {
        auto [mn, mx] = std::minmax_element(out.limits.begin(), out.limits.end());
        out.max_gap = *mx - *mn;
    }
    return out;
}

}  // namespace hypflow
