#pragma once
/// Stationary Navier-Stokes on the truncated exterior annulus by a
/// vorticity-streamfunction Picard iteration.
///
/// Boundary conditions: psi = 0 on both circles (no penetration), omega = 0 on
/// the truncation circle, and a prescribed tangential speed on the obstacle
/// enforced through a Thom-type wall vorticity. The coefficient of the
/// harmonic form d theta is fixed by requiring the pressure to be
/// single-valued, unless the configuration prescribes it.

#include <string>
#include <vector>

#include "hypflow/elliptic.hpp"
#include "hypflow/flows.hpp"

namespace hypflow {

/// Thrown for invalid or unreadable configurations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CirculationMode { solve, prescribed };

struct SolverConfig {
    double a = 1.0;
    double R0 = 1.0;
    double R_out = 8.0;
    int n_r = 128;
    int n_theta = 64;
    /// Tangential speed on the obstacle, counterclockwise positive, one value
    /// per angular node. A single value means a constant speed.
    std::vector<double> wall_data{0.0};
    /// Coefficient of d theta: the starting value in solve mode, the fixed
    /// value in prescribed mode.
    double circulation = 0.0;
    CirculationMode circulation_mode = CirculationMode::solve;
    double relaxation = 0.7;
    double tol = 1e-8;
    int max_iters = 200;
    LinearMethod transport_method = LinearMethod::line_sor;
    LinearMethod stream_method = LinearMethod::fft;
    double sor_omega = 1.0;
    int max_linear_iters = 20000;
    bool parallel = true;
    /// Radius of the measurement region for sup |v|_a in the report.
    double R1 = 2.0;
    /// Directory for an iterate dump when the iteration produces NaN.
    std::string dump_dir;

    /// Throws ConfigError when an invariant fails.
    void validate() const;
    std::vector<double> wall_samples() const;
};

/// Parse a key = value file with [geometry], [boundary] and [iteration] sections.
SolverConfig load_solver_config(const std::string& path);
SolverConfig parse_solver_config(const std::string& text);

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    bool nan_detected = false;
    bool short_circuit = false;
    double wall_residual = 0.0;         ///< relative Thom closure mismatch
    double circulation_residual = 0.0;  ///< relative single-valuedness mismatch
    double vorticity_residual = 0.0;    ///< relative discrete transport residual
    double mass_residual = 0.0;         ///< max |d*v|
    double momentum_residual = 0.0;     ///< max |momentum|_a with recovered pressure
    double momentum_relative = 0.0;     ///< the same over max (2a^2 |v|_a + |nabla_v v|_a)
    double energy = 0.0;                ///< integral of |grad v|_a^2
    double sup_v_R1 = 0.0;              ///< max |v|_a over rho >= R1
    double circulation = 0.0;
    std::vector<double> history;        ///< combined residual per iteration
    std::string to_json() const;
};

struct SolveResult {
    FlowState state;
    SolveReport report;
};

/// Transport coefficients of g(v, grad omega) = vr * omega_rho + vt * omega_theta.
struct TransportVelocity {
    std::vector<double> vr, vt;
};
/// Second-order velocity coefficients from a streamfunction and circulation.
TransportVelocity transport_velocity(const ScalarField& psi, double circulation);

/// Solve -Laplacian(omega) + 2a^2 omega + g(v, grad omega) = 0 with
/// omega = bc on the obstacle and 0 on the truncation circle. The initial
/// guess is taken from omega when supplied.
struct TransportOptions {
    LinearMethod method = LinearMethod::line_sor;
    LinearSolveOptions linear;
};
ScalarField vorticity_transport_solve(const TransportVelocity& vel, const std::vector<double>& bc, GridPtr grid,
                                      const TransportOptions& opt, LinearSolveResult* info = nullptr,
                                      const ScalarField* initial = nullptr);
ScalarField vorticity_transport_solve(const OneFormField& v, const std::vector<double>& bc, GridPtr grid,
                                      const TransportOptions& opt = {}, LinearSolveResult* info = nullptr);
/// Relative residual of the full second-order transport system.
double transport_residual(const TransportVelocity& vel, const ScalarField& omega);

/// Solve Laplacian(psi) = -omega with psi = psi_bc on the obstacle and 0 outside.
ScalarField stream_poisson_solve(const ScalarField& omega, double psi_bc, GridPtr grid,
                                 LinearMethod method = LinearMethod::fft, const LinearSolveOptions& opt = {},
                                 LinearSolveResult* info = nullptr);

/// Thom wall vorticity. The wall slope of psi follows from the tangential
/// speed and the circulation: psi_rho = Gamma/(2 pi s0) - U.
std::vector<double> wall_vorticity(const ScalarField& psi, const std::vector<double>& wall_data, const PolarGrid& grid,
                                   double circulation = 0.0);

/// Circulation mismatch averaged over interior rings: zero when the pressure
/// is single-valued on every circle.
double circulation_condition(const ScalarField& psi, const ScalarField& omega, double circulation);

SolveResult picard_solve(const SolverConfig& cfg);

}  // namespace hypflow
