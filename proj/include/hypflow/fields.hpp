#pragma once
/// Scalar fields, 1-forms and 2-tensors sampled on a PolarGrid, with the
/// covariant operators of the hyperbolic metric, hyperbolic pointwise norms
/// and quadrature against the hyperbolic area form.
///
/// Fields store chart components: a 1-form is v1 dy1 + v2 dy2 and a 2-tensor
/// is sum t_jk dy_j (x) dy_k. Derivatives are fourth order in both directions.

#include <array>
#include <functional>
#include <vector>

#include "hypflow/grid.hpp"

namespace hypflow {

struct ScalarField {
    GridPtr grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0);
    ScalarField(GridPtr g, std::vector<double> v);

    double& operator()(int i, int j) { return values[grid->idx(i, j)]; }
    double operator()(int i, int j) const { return values[grid->idx(i, j)]; }
    std::size_t size() const { return values.size(); }
};

struct OneFormField {
    GridPtr grid;
    std::vector<double> v1, v2;

    OneFormField() = default;
    explicit OneFormField(GridPtr g);
};

struct TwoTensorField {
    GridPtr grid;
    std::vector<double> t11, t12, t21, t22;

    TwoTensorField() = default;
    explicit TwoTensorField(GridPtr g);
};

ScalarField operator+(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f, const ScalarField& g);
ScalarField operator*(double c, const ScalarField& f);
OneFormField operator+(const OneFormField& u, const OneFormField& w);
OneFormField operator-(const OneFormField& u, const OneFormField& w);
OneFormField operator*(double c, const OneFormField& u);

/// Throws when any node value is not finite.
void require_finite(const ScalarField& f, const char* what);
void require_finite(const OneFormField& v, const char* what);

/// Sample f(rho, theta) at every node.
ScalarField sample_polar(GridPtr g, const std::function<double(double rho, double theta)>& f);
/// Sample f(y1, y2) at every node.
ScalarField sample_chart(GridPtr g, const std::function<double(double y1, double y2)>& f);
/// Sample chart components of a 1-form.
OneFormField sample_form(GridPtr g, const std::function<std::array<double, 2>(double y1, double y2)>& f);

/// Derivatives in the geodesic polar coordinates (rho, theta).
std::vector<double> d_rho(const ScalarField& f);
std::vector<double> d_rho2(const ScalarField& f);
std::vector<double> d_theta(const ScalarField& f);
std::vector<double> d_theta2(const ScalarField& f);

/// Chart partial derivatives d/dy1 and d/dy2.
ScalarField partial1(const ScalarField& f);
ScalarField partial2(const ScalarField& f);

/// dF as a 1-form.
OneFormField exterior_derivative(const ScalarField& F);

/// Polar covector components: v = u_rho d rho + u_theta d theta.
struct PolarComponents {
    std::vector<double> u_rho, u_theta;
};
PolarComponents polar_components(const OneFormField& v);
/// Inverse of polar_components.
OneFormField from_polar_components(GridPtr g, const std::vector<double>& u_rho, const std::vector<double>& u_theta);

/// Levi-Civita covariant derivative; t_jk is the dy_j (x) dy_k component.
TwoTensorField covariant_gradient(const OneFormField& v);

/// |v|_a = (a (1 - |y|^2) / 2) |v|_euclid.
ScalarField hyperbolic_norm_form(const OneFormField& v);
/// |T|_a = (a (1 - |y|^2) / 2)^2 |T|_euclid.
ScalarField hyperbolic_norm_tensor(const TwoTensorField& T);
/// Norm of the antisymmetric part of a 2-tensor, (T - T^t)/2.
ScalarField antisymmetric_part_norm(const TwoTensorField& T);

/// omega = *dv.
ScalarField vorticity(const OneFormField& v);
/// d*v, the codifferential (minus the divergence).
ScalarField divergence(const OneFormField& v);
/// Laplace-Beltrami operator of the hyperbolic metric.
ScalarField laplace_beltrami(const ScalarField& f);

/// v = -*d psi + (Gamma / 2 pi) d theta. Then d*v = 0 and *dv = -Laplacian(psi).
OneFormField streamfunction_to_velocity(const ScalarField& psi, double circulation);

/// Closed geodesic annulus rho_lo <= rho <= rho_hi.
struct Annulus {
    double rho_lo, rho_hi;
    static Annulus whole(const PolarGrid& g) { return {g.rho_in(), g.rho_out()}; }
    static Annulus from_chart_radii(double r_lo, double r_hi, Curvature a);
};

/// Integral of f against the hyperbolic area form over the annulus.
double integrate(const ScalarField& f, const Annulus& region);
double integrate(const ScalarField& f);

/// (integral of |x|_a^p)^(1/p).
double lp_norm(const ScalarField& f, double p, const Annulus& region);
double lp_norm(const OneFormField& v, double p, const Annulus& region);
double lp_norm(const TwoTensorField& T, double p, const Annulus& region);

/// Max over the circle of geodesic radius rho of the pointwise norm, with the
/// field interpolated linearly in chart radius between neighbouring rings.
double sup_on_circle(const ScalarField& f, double rho);
double sup_on_circle(const OneFormField& v, double rho);

/// Max of |f| over nodes inside the annulus.
double sup_in(const ScalarField& f, const Annulus& region);

/// Pointwise product and square helpers.
ScalarField pointwise_square(const ScalarField& f);
ScalarField pointwise_product(const ScalarField& f, const ScalarField& g);

}  // namespace hypflow
