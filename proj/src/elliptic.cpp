#include "hypflow/elliptic.hpp"

#include <complex>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hypflow {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RadialSpectralOperator::RadialSpectralOperator(int nr, int nt)
    : n_r(nr), n_theta(nt), lower(nr, 0.0), diag(nr, 1.0), upper(nr, 0.0), angular(nr, 0.0) {}

double RadialSpectralOperator::mode_eigen(int m) const {
    double sn = std::sin(std::numbers::pi * m / n_theta);
    return -4.0 * sn * sn;
}

void RadialSpectralOperator::solve_mode(int m, std::vector<double>& rhs) const {
    const int n = n_r;
    double ev = mode_eigen(m);
    std::vector<double> lo(n), di(n), up(n), scratch(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = lower[i];
        di[i] = diag[i] + angular[i] * ev;
        up[i] = upper[i];
    }
    if (dirichlet_inner || (pin_mean && m == 0)) {
        di[0] = 1.0;
        up[0] = 0.0;
        if (pin_mean && m == 0) rhs[0] = 0.0;
    }
    if (dirichlet_outer) {
        di[n - 1] = 1.0;
        lo[n - 1] = 0.0;
    }
    kernels::thomas(lo.data(), di.data(), up.data(), rhs.data(), n, scratch.data());
}

FivePointOperator RadialSpectralOperator::to_five_point() const {
    if (!dirichlet_inner || !dirichlet_outer) throw std::invalid_argument("to_five_point: needs Dirichlet end rings");
    FivePointOperator A(n_r, n_theta);
    for (int i = 1; i < n_r - 1; ++i)
        for (int j = 0; j < n_theta; ++j) {
            std::size_t p = A.idx(i, j);
            A.c[p] = diag[i] - 2.0 * angular[i];
            A.s[p] = lower[i];
            A.n[p] = upper[i];
            A.e[p] = angular[i];
            A.w[p] = angular[i];
        }
    return A;
}

double face_s(const PolarGrid& g, int i, int side) {
    return std::sinh(g.a() * (g.rho(i) + 0.5 * side * g.h())) / g.a();
}

RadialSpectralOperator fv_laplacian(const PolarGrid& g, double c0) {
    RadialSpectralOperator A(g.n_r(), g.n_theta());
    const double h2 = g.h() * g.h(), k2 = g.k() * g.k();
    for (int i = 1; i < g.n_r() - 1; ++i) {
        double sp = face_s(g, i, +1), sm = face_s(g, i, -1), s = g.s(i);
        A.lower[i] = sm / (s * h2);
        A.upper[i] = sp / (s * h2);
        A.diag[i] = -(sm + sp) / (s * h2) - c0;
        A.angular[i] = 1.0 / (s * s * k2);
    }
    return A;
}

std::vector<double> fft_solve(const RadialSpectralOperator& A, const std::vector<double>& b) {
    const int nr = A.n_r, nt = A.n_theta, nc = nt / 2 + 1;
    std::vector<double> real(b);
    std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(nr) * nc);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        int n[1] = {nt};
        fwd = fftw_plan_many_dft_r2c(1, n, nr, real.data(), nullptr, 1, nt,
                                     reinterpret_cast<fftw_complex*>(spectrum.data()), nullptr, 1, nc, FFTW_ESTIMATE);
        bwd = fftw_plan_many_dft_c2r(1, n, nr, reinterpret_cast<fftw_complex*>(spectrum.data()), nullptr, 1, nc,
                                     real.data(), nullptr, 1, nt, FFTW_ESTIMATE);
    }
    // Planning with FFTW_ESTIMATE leaves the input untouched.
    fftw_execute(fwd);

    std::vector<double> re(nr), im(nr);
    for (int m = 0; m < nc; ++m) {
        for (int i = 0; i < nr; ++i) {
            re[i] = spectrum[static_cast<std::size_t>(i) * nc + m].real();
            im[i] = spectrum[static_cast<std::size_t>(i) * nc + m].imag();
        }
        A.solve_mode(m, re);
        A.solve_mode(m, im);
        for (int i = 0; i < nr; ++i) spectrum[static_cast<std::size_t>(i) * nc + m] = {re[i], im[i]};
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    for (double& x : real) x /= nt;
    return real;
}

LinearMethod parse_linear_method(const std::string& name) {
    if (name == "fft") return LinearMethod::fft;
    if (name == "sor") return LinearMethod::sor;
    if (name == "line_sor" || name == "line-sor") return LinearMethod::line_sor;
    if (name == "cg") return LinearMethod::cg;
    throw std::invalid_argument("unknown linear method '" + name + "'");
}

std::string to_string(LinearMethod m) {
    switch (m) {
        case LinearMethod::fft: return "fft";
        case LinearMethod::sor: return "sor";
        case LinearMethod::line_sor: return "line_sor";
        case LinearMethod::cg: return "cg";
    }
    return "unknown";
}

double relative_residual(const FivePointOperator& A, const std::vector<double>& x, const std::vector<double>& b,
                         bool parallel) {
    double r = parallel ? kernels::omp::residual_max(A, x, b) : kernels::serial::residual_max(A, x, b);
    double scale = 0.0;
    for (int i = 1; i < A.n_r - 1; ++i)
        for (int j = 0; j < A.n_theta; ++j) {
            std::size_t p = A.idx(i, j);
            scale = std::max({scale, std::fabs(b[p]), std::fabs(A.c[p] * x[p])});
        }
    if (scale == 0.0) return r;
    return r / scale;
}

namespace {
template <class Sweep>
LinearSolveResult iterate(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                          const LinearSolveOptions& opt, Sweep sweep) {
    LinearSolveResult res;
    res.relative_residual = relative_residual(A, x, b, opt.parallel);
    const int check_every = 4;
    while (res.relative_residual > opt.tol && res.iterations < opt.max_iters) {
        for (int q = 0; q < check_every; ++q) sweep();
        res.iterations += check_every;
        res.relative_residual = relative_residual(A, x, b, opt.parallel);
        if (!std::isfinite(res.relative_residual)) break;
    }
    res.converged = res.relative_residual <= opt.tol;
    return res;
}
}  // namespace

LinearSolveResult sor_solve(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                            const LinearSolveOptions& opt) {
    return iterate(A, x, b, opt, [&] {
        if (opt.parallel)
            kernels::omp::rb_sor_sweep(A, x, b, opt.omega);
        else
            kernels::serial::rb_sor_sweep(A, x, b, opt.omega);
    });
}

LinearSolveResult line_sor_solve(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                                 const LinearSolveOptions& opt) {
    return iterate(A, x, b, opt, [&] {
        if (opt.parallel)
            kernels::omp::zebra_line_sor_sweep(A, x, b, opt.omega);
        else
            kernels::serial::zebra_line_sor_sweep(A, x, b, opt.omega);
    });
}

LinearSolveResult cg_solve(const FivePointOperator& A, const std::vector<double>& ring_weight, std::vector<double>& x,
                           const std::vector<double>& b, const LinearSolveOptions& opt) {
    const std::size_t m = x.size();
    const int nt = A.n_theta;
    auto dot = [&](const std::vector<double>& u, const std::vector<double>& w) {
        return opt.parallel ? kernels::omp::weighted_dot(ring_weight, nt, u, w)
                            : kernels::serial::weighted_dot(ring_weight, nt, u, w);
    };
    auto apply = [&](const std::vector<double>& u, std::vector<double>& y) {
        if (opt.parallel)
            kernels::omp::apply(A, u, y);
        else
            kernels::serial::apply(A, u, y);
    };
    // Work with the positive definite operator -A, so r = A x - b.
    std::vector<double> ax(m), r(m, 0.0), p(m, 0.0), q(m);
    apply(x, ax);
    for (int i = 1; i < A.n_r - 1; ++i)
        for (int j = 0; j < nt; ++j) {
            std::size_t k = A.idx(i, j);
            r[k] = ax[k] - b[k];
        }
    p = r;
    double rr = dot(r, r);
    LinearSolveResult res;
    res.relative_residual = relative_residual(A, x, b, opt.parallel);
    while (res.relative_residual > opt.tol && res.iterations < opt.max_iters) {
        apply(p, q);
        for (int j = 0; j < nt; ++j) {
            q[A.idx(0, j)] = 0.0;
            q[A.idx(A.n_r - 1, j)] = 0.0;
        }
        for (double& v : q) v = -v;
        double pq = dot(p, q);
        if (!(pq > 0.0)) break;
        double alpha = rr / pq;
        for (std::size_t k = 0; k < m; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        double rr_new = dot(r, r);
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k = 0; k < m; ++k) p[k] = r[k] + beta * p[k];
        ++res.iterations;
        if (res.iterations % 10 == 0 || rr == 0.0) res.relative_residual = relative_residual(A, x, b, opt.parallel);
    }
    res.relative_residual = relative_residual(A, x, b, opt.parallel);
    res.converged = res.relative_residual <= opt.tol;
    return res;
}

LinearSolveResult solve_spectral(const RadialSpectralOperator& A, std::vector<double>& x,
                                 const std::vector<double>& b, LinearMethod method, const LinearSolveOptions& opt,
                                 const std::vector<double>& ring_weight) {
    if (method == LinearMethod::fft) {
        std::vector<double> full(b);
        for (int j = 0; j < A.n_theta; ++j) {
            std::size_t p0 = static_cast<std::size_t>(j);
            std::size_t p1 = static_cast<std::size_t>(A.n_r - 1) * A.n_theta + j;
            if (A.dirichlet_inner) full[p0] = x[p0];
            if (A.dirichlet_outer) full[p1] = x[p1];
        }
        x = fft_solve(A, full);
        LinearSolveResult res;
        res.iterations = 1;
        if (A.dirichlet_inner && A.dirichlet_outer)
            res.relative_residual = relative_residual(A.to_five_point(), x, b, opt.parallel);
        res.converged = true;
        return res;
    }
    FivePointOperator F = A.to_five_point();
    switch (method) {
        case LinearMethod::sor: return sor_solve(F, x, b, opt);
        case LinearMethod::line_sor: return line_sor_solve(F, x, b, opt);
        case LinearMethod::cg: return cg_solve(F, ring_weight, x, b, opt);
        default: break;
    }
    throw std::invalid_argument("solve_spectral: unsupported method");
}

}  // namespace hypflow
