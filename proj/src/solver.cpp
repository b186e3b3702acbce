#include "hypflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <numbers>

#include "hypflow/snapshot.hpp"

namespace hypflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sup_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

bool all_finite(const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

/// First-order upwind implicit part of the transport operator.
FivePointOperator transport_implicit(const PolarGrid& g, const TransportVelocity& vel) {
    FivePointOperator A = fv_laplacian(g, 2.0 * g.a() * g.a()).to_five_point();
    const double h = g.h(), k = g.k();
    for (int i = 1; i < g.n_r() - 1; ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t p = A.idx(i, j);
            double vr = vel.vr[p], vt = vel.vt[p];
            if (vr > 0) {
                A.c[p] -= vr / h;
                A.s[p] += vr / h;
            } else {
                A.c[p] += vr / h;
                A.n[p] -= vr / h;
            }
            if (vt > 0) {
                A.c[p] -= vt / k;
                A.w[p] += vt / k;
            } else {
                A.c[p] += vt / k;
                A.e[p] -= vt / k;
            }
        }
    return A;
}

/// Difference between second- and first-order upwind advection, moved to the
/// right-hand side: the full system is implicit(x) = correction(x).
void transport_correction(const PolarGrid& g, const TransportVelocity& vel, const std::vector<double>& x,
                          std::vector<double>& b) {
    const int nr = g.n_r(), nt = g.n_theta();
    const double h = g.h(), k = g.k();
    b.assign(x.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 1; i < nr - 1; ++i)
        for (int j = 0; j < nt; ++j) {
            std::size_t p = g.idx(i, j);
            double vr = vel.vr[p], vt = vel.vt[p];
            double corr = 0.0;
            if (vr > 0 && i >= 2)
                corr += vr * (x[p] - 2.0 * x[g.idx(i - 1, j)] + x[g.idx(i - 2, j)]) / (2.0 * h);
            else if (vr < 0 && i <= nr - 3)
                corr += vr * (-x[p] + 2.0 * x[g.idx(i + 1, j)] - x[g.idx(i + 2, j)]) / (2.0 * h);
            if (vt > 0)
                corr += vt * (x[p] - 2.0 * x[g.idx(i, (j + nt - 1) % nt)] + x[g.idx(i, (j + nt - 2) % nt)]) / (2.0 * k);
            else if (vt < 0)
                corr += vt * (-x[p] + 2.0 * x[g.idx(i, (j + 1) % nt)] - x[g.idx(i, (j + 2) % nt)]) / (2.0 * k);
            b[p] = corr;
        }
}

bool velocity_is_zero(const TransportVelocity& vel) {
    return sup_abs(vel.vr) == 0.0 && sup_abs(vel.vt) == 0.0;
}

std::vector<double> ring_weights(const PolarGrid& g) {
    std::vector<double> w(g.n_r());
    for (int i = 0; i < g.n_r(); ++i) w[i] = g.s(i);
    return w;
}

}  // namespace

TransportVelocity transport_velocity(const ScalarField& psi, double circulation) {
    const PolarGrid& g = *psi.grid;
    const int nr = g.n_r(), nt = g.n_theta();
    TransportVelocity vel{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    const double c = circulation / kTwoPi;
    for (int i = 1; i < nr - 1; ++i) {
        double s = g.s(i);
        for (int j = 0; j < nt; ++j) {
            std::size_t p = g.idx(i, j);
            double pt = (psi(i, (j + 1) % nt) - psi(i, (j + nt - 1) % nt)) / (2.0 * g.k());
            double pr = (psi(i + 1, j) - psi(i - 1, j)) / (2.0 * g.h());
            vel.vr[p] = pt / s;
            vel.vt[p] = (-s * pr + c) / (s * s);
        }
    }
    return vel;
}

double transport_residual(const TransportVelocity& vel, const ScalarField& omega) {
    const PolarGrid& g = *omega.grid;
    FivePointOperator A = transport_implicit(g, vel);
    std::vector<double> b;
    transport_correction(g, vel, omega.values, b);
    return relative_residual(A, omega.values, b);
}

ScalarField vorticity_transport_solve(const TransportVelocity& vel, const std::vector<double>& bc, GridPtr grid,
                                      const TransportOptions& opt, LinearSolveResult* info,
                                      const ScalarField* initial) {
    const PolarGrid& g = *grid;
    const int nr = g.n_r(), nt = g.n_theta();
    if (static_cast<int>(bc.size()) != nt) throw DomainError("vorticity_transport_solve: bc size must be n_theta");
    ScalarField omega = initial ? *initial : ScalarField(grid);
    for (int j = 0; j < nt; ++j) {
        omega(0, j) = bc[j];
        omega(nr - 1, j) = 0.0;
    }
    LinearSolveResult res;
    if (velocity_is_zero(vel)) {
        RadialSpectralOperator A = fv_laplacian(g, 2.0 * g.a() * g.a());
        std::vector<double> b(g.size(), 0.0);
        res = solve_spectral(A, omega.values, b, opt.method, opt.linear, ring_weights(g));
    } else {
        FivePointOperator A = transport_implicit(g, vel);
        std::vector<double> b;
        LinearSolveOptions lin = opt.linear;
        const int chunk = 2;
        while (true) {
            transport_correction(g, vel, omega.values, b);
            res.relative_residual = relative_residual(A, omega.values, b, lin.parallel);
            if (!std::isfinite(res.relative_residual) || res.relative_residual <= lin.tol || res.iterations >= lin.max_iters)
                break;
            for (int q = 0; q < chunk; ++q) {
                if (opt.method == LinearMethod::sor) {
                    if (lin.parallel)
                        kernels::omp::rb_sor_sweep(A, omega.values, b, lin.omega);
                    else
                        kernels::serial::rb_sor_sweep(A, omega.values, b, lin.omega);
                } else {
                    if (lin.parallel)
                        kernels::omp::zebra_line_sor_sweep(A, omega.values, b, lin.omega);
                    else
                        kernels::serial::zebra_line_sor_sweep(A, omega.values, b, lin.omega);
                }
            }
            res.iterations += chunk;
        }
        res.converged = res.relative_residual <= lin.tol;
    }
    if (info) *info = res;
    return omega;
}

ScalarField vorticity_transport_solve(const OneFormField& v, const std::vector<double>& bc, GridPtr grid,
                                      const TransportOptions& opt, LinearSolveResult* info) {
    const PolarGrid& g = *grid;
    PolarComponents pc = polar_components(v);
    TransportVelocity vel{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    for (int i = 1; i < g.n_r() - 1; ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            std::size_t p = g.idx(i, j);
            vel.vr[p] = pc.u_rho[p];
            vel.vt[p] = pc.u_theta[p] / (g.s(i) * g.s(i));
        }
    return vorticity_transport_solve(vel, bc, grid, opt, info);
}

ScalarField stream_poisson_solve(const ScalarField& omega, double psi_bc, GridPtr grid, LinearMethod method,
                                 const LinearSolveOptions& opt, LinearSolveResult* info) {
    const PolarGrid& g = *grid;
    const int nr = g.n_r(), nt = g.n_theta();
    RadialSpectralOperator S = fv_laplacian(g, 0.0);
    ScalarField psi(grid);
    for (int j = 0; j < nt; ++j) psi(0, j) = psi_bc;
    std::vector<double> b(g.size(), 0.0);
    for (int i = 1; i < nr - 1; ++i)
        for (int j = 0; j < nt; ++j) b[g.idx(i, j)] = -omega(i, j);
    LinearSolveResult res = solve_spectral(S, psi.values, b, method, opt, ring_weights(g));
    if (info) *info = res;
    return psi;
}

std::vector<double> wall_vorticity(const ScalarField& psi, const std::vector<double>& wall_data, const PolarGrid& g,
                                   double circulation) {
    const int nt = g.n_theta();
    if (wall_data.size() != 1 && static_cast<int>(wall_data.size()) != nt)
        throw DomainError("wall_vorticity: wall data must have 1 or n_theta values");
    const double h = g.h(), s0 = g.s(0), c0 = g.dlog_s(0), k = g.k();
    std::vector<double> out(nt);
    for (int j = 0; j < nt; ++j) {
        double U = wall_data.size() == 1 ? wall_data[0] : wall_data[j];
        double slope = circulation / (kTwoPi * s0) - U;
        double ptt = (psi(0, (j + 1) % nt) - 2.0 * psi(0, j) + psi(0, (j + nt - 1) % nt)) / (k * k);
        out[j] = -(2.0 * (psi(1, j) - psi(0, j) - h * slope) / (h * h) + c0 * slope + ptt / (s0 * s0));
    }
    return out;
}

double circulation_condition(const ScalarField& psi, const ScalarField& omega, double circulation) {
    const PolarGrid& g = *psi.grid;
    const int nr = g.n_r(), nt = g.n_theta();
    const double h = g.h(), k = g.k(), a2 = g.a() * g.a();
    double total = 0.0;
    for (int i = 1; i < nr - 1; ++i) {
        double s = g.s(i), acc = 0.0;
        for (int j = 0; j < nt; ++j) {
            double pr = (psi(i + 1, j) - psi(i - 1, j)) / (2.0 * h);
            double wr = (omega(i + 1, j) - omega(i - 1, j)) / (2.0 * h);
            double vr = (psi(i, (j + 1) % nt) - psi(i, (j + nt - 1) % nt)) / (2.0 * k * s);
            acc += s * pr + s * (wr - omega(i, j) * vr) / (2.0 * a2);
        }
        total += acc * k - circulation;
    }
    return total / (nr - 2);
}

void SolverConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("solver config: " + m); };
    if (!(a > 0.0) || !std::isfinite(a)) fail("a must be positive");
    if (!(R0 > 0.0)) fail("R0 must be positive");
    if (!(R_out > R0 + 2.0)) fail("R_out must exceed R0 + 2");
    if (!(ball_radius_in_chart(R_out, Curvature(a)) < 1.0 - kChartEdgeTolerance))
        fail("R_out too large for the chart at this curvature");
    if (n_r < 16) fail("n_r must be at least 16");
    if (n_theta < 16 || (n_theta & (n_theta - 1)) != 0) fail("n_theta must be a power of two >= 16");
    if (wall_data.size() != 1 && static_cast<int>(wall_data.size()) != n_theta)
        fail("wall data needs 1 or n_theta values");
    for (double u : wall_data)
        if (!std::isfinite(u)) fail("wall data must be finite");
    if (!std::isfinite(circulation)) fail("circulation must be finite");
    if (!(relaxation > 0.0 && relaxation <= 1.0)) fail("relaxation must lie in (0,1]");
    if (!(tol >= 1e-12 && tol < 1.0)) fail("tol must lie in [1e-12, 1)");
    if (max_iters < 1) fail("max_iters must be positive");
    if (!(sor_omega > 0.0 && sor_omega < 2.0)) fail("sor_omega must lie in (0,2)");
    if (!(R1 > R0 && R1 < R_out)) fail("R1 must lie between R0 and R_out");
}

std::vector<double> SolverConfig::wall_samples() const {
    if (wall_data.size() == 1) return std::vector<double>(n_theta, wall_data[0]);
    return wall_data;
}

std::string SolveReport::to_json() const {
    nlohmann::json j = {{"iterations", iterations},
                        {"converged", converged},
                        {"diverged", diverged},
                        {"nan_detected", nan_detected},
                        {"short_circuit", short_circuit},
                        {"wall_residual", wall_residual},
                        {"circulation_residual", circulation_residual},
                        {"vorticity_residual", vorticity_residual},
                        {"mass_residual", mass_residual},
                        {"momentum_residual", momentum_residual},
                        {"momentum_relative", momentum_relative},
                        {"energy", energy},
                        {"sup_v_R1", sup_v_R1},
                        {"circulation", circulation},
                        {"history", history}};
    return j.dump(2);
}

namespace {

struct WallPreconditioner {
    int nt = 0;
    std::vector<double> gain;  ///< g_m - 1 for each mode
    double J[2][2] = {{0, 0}, {0, 0}};
    bool with_circulation = true;
    std::vector<double> cos_table, sin_table;

    WallPreconditioner(const PolarGrid& g, bool solve_circulation) : nt(g.n_theta()), with_circulation(solve_circulation) {
        const int nr = g.n_r();
        const double h = g.h(), a2 = g.a() * g.a();
        RadialSpectralOperator T = fv_laplacian(g, 2.0 * a2);
        RadialSpectralOperator S = fv_laplacian(g, 0.0);
        gain.resize(nt / 2 + 1);
        for (int m = 0; m <= nt / 2; ++m) {
            std::vector<double> w(nr, 0.0);
            w[0] = 1.0;
            T.solve_mode(m, w);
            std::vector<double> p(nr, 0.0);
            for (int i = 1; i < nr - 1; ++i) p[i] = -w[i];
            S.solve_mode(m, p);
            gain[m] = -2.0 * p[1] / (h * h) - 1.0;
            if (m == 0) {
                double dC = 0.0;
                for (int i = 1; i < nr - 1; ++i) {
                    double pr = (p[i + 1] - p[i - 1]) / (2.0 * h);
                    double wr = (w[i + 1] - w[i - 1]) / (2.0 * h);
                    dC += kTwoPi * g.s(i) * (pr + wr / (2.0 * a2));
                }
                dC /= (nr - 2);
                J[0][0] = gain[0];
                J[0][1] = (2.0 / h - g.dlog_s(0)) / (kTwoPi * g.s(0));
                J[1][0] = dC;
                J[1][1] = -1.0;
            }
        }
        cos_table.resize(static_cast<std::size_t>(nt / 2 + 1) * nt);
        sin_table.resize(cos_table.size());
        for (int m = 0; m <= nt / 2; ++m)
            for (int j = 0; j < nt; ++j) {
                double t = kTwoPi * static_cast<double>((static_cast<long>(m) * j) % nt) / nt;
                cos_table[static_cast<std::size_t>(m) * nt + j] = std::cos(t);
                sin_table[static_cast<std::size_t>(m) * nt + j] = std::sin(t);
            }
    }

    /// Newton-like step for (wall vorticity, circulation) from the residuals.
    void step(const std::vector<double>& R, double C, std::vector<double>& d_wall, double& d_circ) const {
        d_wall.assign(nt, 0.0);
        double mean = 0.0;
        for (double r : R) mean += r;
        mean /= nt;
        if (with_circulation) {
            double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
            double d0 = (-mean * J[1][1] + C * J[0][1]) / det;
            d_circ = (-C * J[0][0] + mean * J[1][0]) / det;
            for (double& x : d_wall) x = d0;
        } else {
            d_circ = 0.0;
            for (double& x : d_wall) x = -mean / J[0][0];
        }
        for (int m = 1; m <= nt / 2; ++m) {
            const double* ct = cos_table.data() + static_cast<std::size_t>(m) * nt;
            const double* st = sin_table.data() + static_cast<std::size_t>(m) * nt;
            double ac = 0.0, as = 0.0;
            for (int j = 0; j < nt; ++j) {
                ac += R[j] * ct[j];
                as += R[j] * st[j];
            }
            double f = (m == nt / 2) ? 1.0 / nt : 2.0 / nt;
            ac *= f;
            as *= f;
            for (int j = 0; j < nt; ++j) d_wall[j] -= (ac * ct[j] + as * st[j]) / gain[m];
        }
    }
};

void fill_report(SolveResult& out, const SolverConfig& cfg) {
    const PolarGrid& g = *out.state.v.grid;
    NSResidual ns = ns_residual(out.state);
    out.report.mass_residual = ns.mass_sup;
    out.report.momentum_residual = ns.momentum_sup;
    // Scale: the largest of the terms that balance in the momentum equation.
    const double a2 = out.state.a * out.state.a;
    ScalarField vnorm = hyperbolic_norm_form(out.state.v);
    ScalarField anorm = hyperbolic_norm_form(advection(out.state.v));
    double vsup = 0.0;
    for (std::size_t p = 0; p < vnorm.values.size(); ++p)
        vsup = std::max(vsup, 2.0 * a2 * vnorm.values[p] + anorm.values[p]);
    out.report.momentum_relative = vsup > 0.0 ? ns.momentum_sup / vsup : ns.momentum_sup;
    out.report.energy = integrate(pointwise_square(hyperbolic_norm_tensor(covariant_gradient(out.state.v))));
    ScalarField speed = hyperbolic_norm_form(out.state.v);
    double sup = sup_on_circle(out.state.v, cfg.R1);
    for (int i = 0; i < g.n_r(); ++i)
        if (g.rho(i) >= cfg.R1)
            for (int j = 0; j < g.n_theta(); ++j) sup = std::max(sup, speed(i, j));
    out.report.sup_v_R1 = sup;
    out.report.circulation = out.state.circulation;
}

void dump_iterate(const SolverConfig& cfg, const ScalarField& psi, const ScalarField& omega) {
    if (cfg.dump_dir.empty()) return;
    std::filesystem::create_directories(cfg.dump_dir);
    Snapshot snap;
    snap.grid = psi.grid;
    snap.add("psi", psi);
    snap.add("omega", omega);
    write_snapshot((std::filesystem::path(cfg.dump_dir) / "nan_iterate.csv").string(), snap);
}

}  // namespace

SolveResult picard_solve(const SolverConfig& cfg) {
    cfg.validate();
    GridPtr grid = PolarGrid::geodesic(cfg.a, cfg.R0, cfg.R_out, cfg.n_r, cfg.n_theta);
    const PolarGrid& g = *grid;
    const int nt = g.n_theta();
    const std::vector<double> U = cfg.wall_samples();
    const bool solve_circ = cfg.circulation_mode == CirculationMode::solve;

    SolveResult out;
    out.state.a = cfg.a;
    if (sup_abs(U) == 0.0 && cfg.circulation == 0.0) {
        out.state.v = OneFormField(grid);
        out.state.P = ScalarField(grid);
        out.state.omega = ScalarField(grid);
        out.state.psi = ScalarField(grid);
        out.report.iterations = 1;
        out.report.converged = true;
        out.report.short_circuit = true;
        out.report.history.push_back(0.0);
        fill_report(out, cfg);
        return out;
    }

    WallPreconditioner pre(g, solve_circ);
    TransportOptions topt;
    topt.method = cfg.transport_method;
    topt.linear.tol = cfg.tol / 10.0;
    topt.linear.max_iters = cfg.max_linear_iters;
    topt.linear.omega = cfg.sor_omega;
    topt.linear.parallel = cfg.parallel;
    LinearSolveOptions sopt = topt.linear;

    ScalarField psi(grid), omega(grid);
    double circ = cfg.circulation;
    std::vector<double> wall(nt, 0.0);
    const double speed_scale = std::max(sup_abs(U), std::fabs(cfg.circulation) / (kTwoPi * g.s(0)));

    ScalarField best_psi = psi, best_omega = omega;
    double best_circ = circ, best_res = INFINITY;
    std::vector<double> R(nt), d_wall;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        TransportVelocity vel = transport_velocity(psi, circ);
        LinearSolveResult tinfo;
        omega = vorticity_transport_solve(vel, wall, grid, topt, &tinfo, &omega);
        psi = stream_poisson_solve(omega, 0.0, grid, cfg.stream_method, sopt);

        std::vector<double> thom = wall_vorticity(psi, U, g, circ);
        for (int j = 0; j < nt; ++j) R[j] = thom[j] - wall[j];
        double C = solve_circ ? circulation_condition(psi, omega, circ) : 0.0;
        double wscale = std::max({sup_abs(wall), sup_abs(thom), 1e-300});
        double cscale = std::max({std::fabs(circ), kTwoPi * g.s(0) * speed_scale, 1e-300});
        double rel_w = sup_abs(R) / wscale;
        double rel_c = std::fabs(C) / cscale;
        double rel_t = transport_residual(transport_velocity(psi, circ), omega);
        double combined = std::max({rel_w, rel_c, rel_t});
        out.report.history.push_back(combined);
        out.report.iterations = it;

        if (!std::isfinite(combined) || !all_finite(psi.values) || !all_finite(omega.values)) {
            out.report.nan_detected = true;
            out.report.diverged = true;
            dump_iterate(cfg, psi, omega);
            break;
        }
        if (combined < best_res) {
            best_res = combined;
            best_psi = psi;
            best_omega = omega;
            best_circ = circ;
            out.report.wall_residual = rel_w;
            out.report.circulation_residual = rel_c;
            out.report.vorticity_residual = rel_t;
        }
        if (combined <= cfg.tol) {
            out.report.converged = true;
            break;
        }
        double d_circ = 0.0;
        pre.step(R, C, d_wall, d_circ);
        for (int j = 0; j < nt; ++j) wall[j] += cfg.relaxation * d_wall[j];
        circ += cfg.relaxation * d_circ;
    }
    if (!out.report.converged) out.report.diverged = true;

    out.state.psi = best_psi;
    out.state.omega = best_omega;
    out.state.circulation = best_circ;
    out.state.v = streamfunction_to_velocity(best_psi, best_circ);
    out.state.P = recover_pressure(out.state.v, cfg.a);
    fill_report(out, cfg);
    return out;
}

}  // namespace hypflow
