#pragma once
/// Exact harmonic-potential flows, the stationary Navier-Stokes residual in
/// chart components, and pressure recovery from a velocity field.

#include <optional>
#include <string>
#include <vector>

#include "hypflow/fields.hpp"

namespace hypflow {

/// Continuous data on the circle at infinity, held as a trigonometric
/// polynomial phi(theta) = cos[0] + sum_n (cos[n] cos(n theta) + sin[n] sin(n theta)).
class BoundaryTrace {
public:
    /// Trigonometric interpolant of equally spaced samples (Nyquist term halved).
    static BoundaryTrace from_samples(const std::vector<double>& samples);
    static BoundaryTrace from_fourier(std::vector<double> cos_coef, std::vector<double> sin_coef);
    /// {"kind":"samples","values":[...]} or {"kind":"fourier","cos":[...],"sin":[...]}.
    static BoundaryTrace from_json(const std::string& text);
    static BoundaryTrace load(const std::string& path);
    std::string to_json() const;

    double operator()(double theta) const;
    const std::vector<double>& cos_coef() const { return cos_; }
    const std::vector<double>& sin_coef() const { return sin_; }
    int degree() const { return static_cast<int>(cos_.size()) - 1; }

    /// Extremes over a dense sample of the circle.
    double max_value() const { return max_; }
    double min_value() const { return min_; }
    bool nonconstant() const { return max_ - min_ > 1e-12; }

    /// Same trace scaled by c.
    BoundaryTrace scaled(double c) const;

private:
    BoundaryTrace(std::vector<double> c, std::vector<double> s);
    std::vector<double> cos_, sin_;
    double max_ = 0.0, min_ = 0.0;
};

struct FlowState {
    OneFormField v;
    ScalarField P;
    ScalarField omega;
    std::optional<ScalarField> psi;
    double circulation = 0.0;
    double a = 1.0;
};

/// Bounded harmonic extension of phi: the Poisson integral of the
/// trigonometric polynomial, F = sum_n r^n (c_n cos + s_n sin).
ScalarField poisson_harmonic(const BoundaryTrace& phi, GridPtr grid);

/// v = dF, P = -2a^2 F - |dF|_a^2 / 2. Throws DomainError when the
/// Laplacian of F exceeds 10 * harmonic_tol relative to sup |F|.
FlowState potential_flow(const ScalarField& F, double a, double harmonic_tol = 1e-3);
/// Same flow with F, dF and P evaluated in closed form from the Fourier
/// coefficients of phi, so the only discretization error left in a residual
/// is the one of the operators applied to it. omega is still computed.
FlowState potential_flow(const BoundaryTrace& phi, GridPtr grid);

/// nabla_v v in chart components.
OneFormField advection(const OneFormField& v);

/// d*dv + 2a^2 v in chart components, written as the componentwise
/// Laplace-Beltrami plus the curl coupling. Valid for divergence-free v.
OneFormField viscous_term(const OneFormField& v);

struct NSResidual {
    OneFormField momentum;      ///< chart components of d*dv + 2a^2 v + nabla_v v + dP
    ScalarField mass;           ///< d*v
    ScalarField momentum_norm;  ///< pointwise |momentum|_a
    double momentum_sup = 0.0;  ///< max of momentum_norm
    double mass_sup = 0.0;      ///< max |d*v|
};

NSResidual ns_residual(const FlowState& s);

/// Finite-volume Neumann solve for P with dP balancing the rest of the
/// momentum equation; gauge fixed by zero mean on the innermost ring.
ScalarField recover_pressure(const OneFormField& v, double a);

struct RayLimits {
    std::vector<double> directions;
    std::vector<double> limits;      ///< fitted L in P ~ L + c exp(-a rho)
    std::vector<double> amplitudes;  ///< fitted c
    double rho_lo = 0.0, rho_hi = 0.0;
    int rings_used = 0;
    double max_gap = 0.0;
};

/// Least-squares fit of P = L + c exp(-a rho) along each ray over the window.
RayLimits pressure_ray_limits(const ScalarField& P, const std::vector<double>& directions, double rho_lo,
                              double rho_hi);

/// Values of f along the ray at angle theta, one per ring (4-point Lagrange in theta).
std::vector<double> ray_values(const ScalarField& f, double theta);

}  // namespace hypflow
