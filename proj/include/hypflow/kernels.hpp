#pragma once
/// Matrix-free kernels for five-point operators on the polar node layout.
///
/// Every kernel exists twice: a plain serial reference in kernels::serial and
/// an OpenMP version in kernels::omp. The red-black and zebra orderings make
/// the two bitwise identical for the sweeps; reductions (dot products) agree
/// to rounding.

#include <cstddef>
#include <vector>

namespace hypflow {

/// y_ij = c x_ij + n x_{i+1,j} + s x_{i-1,j} + e x_{i,j+1} + w x_{i,j-1},
/// periodic in j. Rings 0 and n_r-1 are Dirichlet rows: their values are held
/// fixed by every sweep and they are excluded from residuals.
struct FivePointOperator {
    int n_r = 0, n_theta = 0;
    std::vector<double> c, n, s, e, w;

    FivePointOperator() = default;
    FivePointOperator(int nr, int nt);
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(j);
    }
    std::size_t size() const { return c.size(); }
};

namespace kernels {

namespace serial {
/// y = A x on interior rows; boundary rows of y are copied from x.
void apply(const FivePointOperator& A, const std::vector<double>& x, std::vector<double>& y);
/// Max |b - A x| over interior rows.
double residual_max(const FivePointOperator& A, const std::vector<double>& x, const std::vector<double>& b);
/// One red-black Gauss-Seidel sweep with over-relaxation factor omega.
void rb_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b, double omega);
/// One zebra sweep: exact tridiagonal solves along radial lines, even angles
/// first, then odd angles, over-relaxed by omega.
void zebra_line_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                          double omega);
/// sum_i weight[i] * sum_j x_ij y_ij over interior rows.
double weighted_dot(const std::vector<double>& ring_weight, int n_theta, const std::vector<double>& x,
                    const std::vector<double>& y);
}  // namespace serial

namespace omp {
void apply(const FivePointOperator& A, const std::vector<double>& x, std::vector<double>& y);
double residual_max(const FivePointOperator& A, const std::vector<double>& x, const std::vector<double>& b);
void rb_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b, double omega);
void zebra_line_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                          double omega);
double weighted_dot(const std::vector<double>& ring_weight, int n_theta, const std::vector<double>& x,
                    const std::vector<double>& y);
}  // namespace omp

/// Solve a tridiagonal system in place (Thomas algorithm). lower[0] and
/// upper[m-1] are ignored. rhs is overwritten with the solution.
void thomas(const double* lower, const double* diag, const double* upper, double* rhs, int m, double* scratch);

}  // namespace kernels
}  // namespace hypflow
