#pragma once
/// Numerical checks of the decay theorems and a priori inequalities, the
/// randomized audits behind them, and the suite runner used by the CLI.

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "hypflow/solver.hpp"

namespace hypflow {

enum class CheckStatus { pass, fail, vacuous };
std::string to_string(CheckStatus s);

struct DecayReport {
    std::string field;
    std::vector<double> radii;
    std::vector<double> sup_values;
    std::vector<double> bound_values;  ///< empty when no pointwise bound applies
    /// Positive decay rate: minus the least-squares slope of log(sup) against rho.
    double fitted_rate = 0.0;
    double theoretical_rate = 0.0;
    double margin = 0.0;  ///< fitted - theoretical
    double fit_lo = 0.0, fit_hi = 0.0;
    CheckStatus status = CheckStatus::fail;
    /// Extra scalars specific to the check (A, delta, violation counts, ...).
    nlohmann::json details = nlohmann::json::object();

    bool pass() const { return status != CheckStatus::fail; }
    nlohmann::json to_json() const;
    /// Columns rho, sup_value, bound_value.
    std::string to_csv() const;
};

/// Least-squares slope of log(y) against x over the points with y > 0 inside [lo, hi].
double log_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);

/// Smooth ramps used as cutoffs: phi1 rises from 0 at (R0+R1)/2 to 1 at R1,
/// phi2 falls from 1 at t = 1 to 0 at t = 2. Both are quintic smoothsteps.
struct CutoffSpec {
    double R0 = 1.0, R1 = 2.0;

    double phi1(double rho) const;
    double dphi1(double rho) const;
    double d2phi1(double rho) const;
    static double phi2(double t);
    static double dphi2(double t);

    /// Checks both slope bounds and the plateau values on a dense sample.
    bool valid(int samples = 4001) const;
    /// sup |Laplacian(phi1 o rho)| + sup |grad(phi1 o rho)| by dense sampling.
    double h1_constant(double a, int samples = 20001) const;
};

struct VelocityDecayOptions {
    double reduction = 1e-2;  ///< final sweep value must drop below this times the first
};
/// Sup of |v|_a over ring windows rho +- r(a) swept across the grid.
DecayReport check_velocity_decay(const FlowState& s, const VelocityDecayOptions& opt = {});

struct VorticityDecayOptions {
    double fit_fraction = 0.6;  ///< fit window [R1, R1 + fit_fraction (R_out - R1)]
    double rate_tolerance = 0.05;
};
/// Pointwise |omega| <= A exp(-delta rho) on rho > R1 with delta from the
/// measured sup |v|_a on Omega(R1), plus a fitted empirical rate.
DecayReport check_vorticity_decay(const FlowState& s, double R1, const VorticityDecayOptions& opt = {});

struct BarrierReport {
    double a = 0.0, v_inf = 0.0, delta = 0.0;
    double analytic_margin = 0.0;  ///< -(delta^2 + (v_inf - a) delta - 2a^2)
    double nodal_margin = 0.0;     ///< min over rings of -L(e^{-delta rho}) e^{delta rho}, worst advection sign
    bool pass = false;
    nlohmann::json to_json() const;
};
BarrierReport check_barrier(double a, double delta, double v_inf, const PolarGrid& grid);
/// a in {0.5, 1, 2, 4}, v_inf in {0, a/2, a, 2a}, delta = delta_rate(a, v_inf).
std::vector<BarrierReport> barrier_sweep();

struct InequalityReport {
    std::string name;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    CheckStatus status = CheckStatus::fail;
    nlohmann::json details = nlohmann::json::object();
    nlohmann::json to_json() const;
};
/// Both sides below this count as a vacuous pass.
inline constexpr double kVacuousLevel = 1e-14;

/// int_{Omega(R1)} |v|_a^2 <= C(a, R0, R1) int_{Omega(R0)} |grad v|_a^2.
InequalityReport check_poincare(const OneFormField& v, double a, double R0, double R1);
/// H1 estimate for the vorticity with the cutoff constant of cut.
InequalityReport check_h1_vorticity(const FlowState& s, double R0, double R1, const CutoffSpec& cut);

struct PressureReport {
    RayLimits rays;
    std::vector<double> targets;  ///< -2a^2 phi at each direction
    double gap = 0.0;
    double expected_gap = 0.0;
    double worst_ray_error = 0.0;  ///< relative to the scaled tolerance
    CheckStatus status = CheckStatus::fail;
    nlohmann::json to_json() const;
};
/// Potential flow from phi, ray limits of P in 8 directions over the outer
/// window [rho_out - 3/a, rho_out].
PressureReport check_pressure_nonconvergence(const BoundaryTrace& phi, double a, GridPtr grid);

/// Solution of omega'' + a coth(a rho) omega' - 2a^2 omega = 0 with
/// omega(R0) = 1 and omega(R_out) = 0, sampled at rhos.
std::vector<double> radial_vorticity_oracle(double a, double R0, double R_out, const std::vector<double>& rhos);

// Randomized audits. Each returns the worst case and the violation count.
struct AuditReport {
    std::string name;
    int samples = 0;
    int violations = 0;
    int vacuous = 0;
    double worst_ratio = 0.0;  ///< max of lhs/rhs (or the audited quantity)
    std::uint64_t seed = 0;
    nlohmann::json details = nlohmann::json::object();
    nlohmann::json to_json() const;
    bool pass() const { return violations == 0; }
};

/// Euclidean Dirichlet energy of chart components on the unit geodesic ball
/// against 32 {cosh^4(a/2)/a^2 ||grad u||^2 + sinh^2(a) ||u||^2}.
AuditReport audit_chart_gradient(double a, int samples, std::uint64_t seed, int n = 96);
/// Poincare inequality on Gaussian-bump streamfunction fields.
AuditReport audit_poincare(double a, int samples, std::uint64_t seed, int n = 96);
/// Vorticity H1 estimate on solver outputs with random wall data.
AuditReport audit_h1_vorticity(const std::vector<double>& curvatures, int samples, std::uint64_t seed, int n_r = 48,
                               int n_theta = 16);
/// Pointwise |dv|_a <= |grad v|_a on random smooth forms.
AuditReport audit_pointwise_curl(double a, int samples, std::uint64_t seed, int n = 64);
/// Max of ||w||_4 / (||w||_2 + ||grad w||_2); ratio field holds the maxima at n and 2n.
AuditReport audit_ladyzhenskaya(double a, int samples, std::uint64_t seed, int n = 48);

/// Random divergence-free form from a sum of Gaussian bumps placed in the
/// annulus (rho_lo, rho_hi), effectively zero at both grid edges.
OneFormField random_bump_flow(GridPtr grid, double rho_lo, double rho_hi, std::uint64_t seed);

// Linear Stokes sup-norm ratio on chart disks.
/// Manufactured instance: u = (d psi/dy, -d psi/dx) for a polynomial psi,
/// polynomial P, F = -Laplacian(u) + grad P, on the disk of radius R.
struct StokesInstance {
    std::vector<std::vector<double>> psi;  ///< psi[i][j] multiplies x^i y^j
    std::vector<std::vector<double>> P;
    double R = 1.0;
    double amplitude = 1.0;  ///< u is amplitude * u(y / scale)
    double scale = 1.0;

    static StokesInstance random(std::uint64_t seed, int degree = 4);
    /// u_R(y) = R^{-2} u(R y) on the unit disk, for an instance on the disk of radius R.
    StokesInstance rescaled_to_unit() const;
    /// The same profile stretched to the disk of radius R.
    StokesInstance on_disk(double radius) const;
};
struct StokesRatio {
    double sup_u = 0.0, f_norm = 0.0, u_norm = 0.0, grad_norm = 0.0, ratio = 0.0;
};
/// ||u||_inf(D(R/2)) / (R^{1/2} ||F||_{4/3} + R^{-1} ||u||_2 + ||grad u||_2), all on D(R).
StokesRatio stokes_supnorm_ratio(const StokesInstance& inst, int radial_nodes = 48, int angular_nodes = 96);

struct StokesReport {
    std::vector<double> radii;
    std::vector<double> ratios;
    double max_scaling_error = 0.0;     ///< |ratio(D(R)) - ratio(unit rescaled)| / ratio
    double max_refinement_change = 0.0; ///< relative change under quadrature doubling
    double max_radius_spread = 0.0;     ///< relative spread across R for the same profile
    double empirical_sup = 0.0;
    CheckStatus status = CheckStatus::fail;
    nlohmann::json to_json() const;
};
StokesReport check_stokes_supnorm_ratio(const std::vector<StokesInstance>& instances,
                                        const std::vector<double>& radii = {0.5, 1.0, 2.0});

// Suite runner.
struct SuiteConfig {
    SolverConfig solver;
    std::vector<std::string> checks;  ///< empty means all
    std::uint64_t seed = 12345;
    int audit_samples = 100;
    int exact_n_r = 128, exact_n_theta = 128;
    std::string out_dir;
};
/// Reads the solver sections plus an optional [suite] section with keys
/// checks, seed, audit_samples, exact_grid.
SuiteConfig load_suite_config(const std::string& path);
SuiteConfig parse_suite_config(const std::string& text);
std::vector<std::string> suite_check_names();

struct SuiteResult {
    int exit_code = 1;
    nlohmann::json report;
};
SuiteResult run_suite(const SuiteConfig& cfg);

}  // namespace hypflow
