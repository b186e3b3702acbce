#pragma once
/// Second-order finite-volume elliptic operators on the polar grid and the
/// linear solvers used for them: an FFT-in-theta / tridiagonal-in-rho direct
/// solver for operators with angle-independent coefficients, red-black SOR,
/// zebra line SOR, and conjugate gradients on the symmetrized operator.

#include <string>
#include <vector>

#include "hypflow/grid.hpp"
#include "hypflow/kernels.hpp"

namespace hypflow {

/// Operator with angle-independent coefficients:
///   (A x)_ij = lower_i x_{i-1,j} + diag_i x_ij + upper_i x_{i+1,j}
///            + angular_i (x_{i,j+1} - 2 x_ij + x_{i,j-1}).
/// End rings are either Dirichlet rows (x = b) or carry their own coefficients.
struct RadialSpectralOperator {
    int n_r = 0, n_theta = 0;
    std::vector<double> lower, diag, upper, angular;
    bool dirichlet_inner = true;
    bool dirichlet_outer = true;
    /// For singular Neumann problems: replace the mode-0 equation of ring 0
    /// by x = 0, which fixes the additive constant (zero mean on ring 0).
    bool pin_mean = false;

    RadialSpectralOperator() = default;
    RadialSpectralOperator(int nr, int nt);

    /// Eigenvalue of the periodic second difference for Fourier mode m.
    double mode_eigen(int m) const;
    /// Solve the real radial system of Fourier mode m in place.
    void solve_mode(int m, std::vector<double>& rhs) const;
    /// Equivalent five-point operator (Dirichlet ends only).
    FivePointOperator to_five_point() const;
};

/// Finite-volume discretization of Laplace-Beltrami minus c0:
///   [s_{i+1/2}(f_{i+1}-f_i) - s_{i-1/2}(f_i-f_{i-1})]/(s_i h^2)
///   + (f_{j+1} - 2 f_j + f_{j-1})/(s_i k)^2 - c0 f,
/// with Dirichlet rows on both end rings. Multiplying row i by s_i makes it
/// symmetric, which is what the CG mode uses.
RadialSpectralOperator fv_laplacian(const PolarGrid& g, double c0);

/// s_{i +- 1/2} = sinh(a (rho_i +- h/2)) / a.
double face_s(const PolarGrid& g, int i, int side);

/// Direct solve with one FFT per ring and one tridiagonal solve per mode.
std::vector<double> fft_solve(const RadialSpectralOperator& A, const std::vector<double>& b);

enum class LinearMethod { fft, sor, line_sor, cg };
LinearMethod parse_linear_method(const std::string& name);
std::string to_string(LinearMethod m);

struct LinearSolveOptions {
    double tol = 1e-10;       ///< relative residual target
    int max_iters = 20000;
    double omega = 1.0;       ///< over-relaxation factor for the SOR modes
    bool parallel = true;     ///< use the OpenMP kernels
};

struct LinearSolveResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Relative residual max|b - A x| / max(max|b|, max|diag x|) over interior rows.
double relative_residual(const FivePointOperator& A, const std::vector<double>& x, const std::vector<double>& b,
                         bool parallel = true);

LinearSolveResult sor_solve(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                            const LinearSolveOptions& opt);
LinearSolveResult line_sor_solve(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                                 const LinearSolveOptions& opt);
/// CG for operators that become symmetric negative definite after scaling
/// row i by ring_weight[i].
LinearSolveResult cg_solve(const FivePointOperator& A, const std::vector<double>& ring_weight, std::vector<double>& x,
                           const std::vector<double>& b, const LinearSolveOptions& opt);

/// Solve with the chosen method. x carries Dirichlet values on the end rings
/// and the initial guess; b holds the interior right-hand side.
LinearSolveResult solve_spectral(const RadialSpectralOperator& A, std::vector<double>& x,
                                 const std::vector<double>& b, LinearMethod method, const LinearSolveOptions& opt,
                                 const std::vector<double>& ring_weight);

}  // namespace hypflow
