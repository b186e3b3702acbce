#include <algorithm>
#include <cmath>

#include "hypflow/kernels.hpp"

namespace hypflow::kernels::omp {

void apply(const FivePointOperator& A, const std::vector<double>& x, std::vector<double>& y) {
    const int nt = A.n_theta;
    y.resize(x.size());
    for (int j = 0; j < nt; ++j) {
        y[A.idx(0, j)] = x[A.idx(0, j)];
        y[A.idx(A.n_r - 1, j)] = x[A.idx(A.n_r - 1, j)];
    }
#pragma omp parallel for schedule(static)
    for (int i = 1; i < A.n_r - 1; ++i)
        for (int j = 0; j < nt; ++j) {
            std::size_t p = A.idx(i, j);
            int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
            y[p] = A.c[p] * x[p] + A.n[p] * x[A.idx(i + 1, j)] + A.s[p] * x[A.idx(i - 1, j)] +
                   A.e[p] * x[A.idx(i, jp)] + A.w[p] * x[A.idx(i, jm)];
        }
}

double residual_max(const FivePointOperator& A, const std::vector<double>& x, const std::vector<double>& b) {
    const int nt = A.n_theta;
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (int i = 1; i < A.n_r - 1; ++i)
        for (int j = 0; j < nt; ++j) {
            std::size_t p = A.idx(i, j);
            int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
            double ax = A.c[p] * x[p] + A.n[p] * x[A.idx(i + 1, j)] + A.s[p] * x[A.idx(i - 1, j)] +
                        A.e[p] * x[A.idx(i, jp)] + A.w[p] * x[A.idx(i, jm)];
            worst = std::max(worst, std::fabs(b[p] - ax));
        }
    return worst;
}

void rb_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b, double omega) {
    const int nt = A.n_theta;
    for (int color = 0; color < 2; ++color) {
#pragma omp parallel for schedule(static)
        for (int i = 1; i < A.n_r - 1; ++i)
            for (int j = (i + color) % 2; j < nt; j += 2) {
                std::size_t p = A.idx(i, j);
                int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
                double off = A.n[p] * x[A.idx(i + 1, j)] + A.s[p] * x[A.idx(i - 1, j)] + A.e[p] * x[A.idx(i, jp)] +
                             A.w[p] * x[A.idx(i, jm)];
                double gs = (b[p] - off) / A.c[p];
                x[p] += omega * (gs - x[p]);
            }
    }
}

void zebra_line_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                          double omega) {
    const int nt = A.n_theta;
    const int m = A.n_r - 2;
    for (int color = 0; color < 2; ++color) {
#pragma omp parallel
        {
            std::vector<double> lo(m), di(m), up(m), rhs(m), scratch(m);
#pragma omp for schedule(static)
            for (int jj = 0; jj < nt / 2; ++jj) {
                int j = 2 * jj + color;
                int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
                for (int q = 0; q < m; ++q) {
                    int i = q + 1;
                    std::size_t p = A.idx(i, j);
                    lo[q] = A.s[p];
                    di[q] = A.c[p];
                    up[q] = A.n[p];
                    rhs[q] = b[p] - A.e[p] * x[A.idx(i, jp)] - A.w[p] * x[A.idx(i, jm)];
                }
                rhs[0] -= lo[0] * x[A.idx(0, j)];
                rhs[m - 1] -= up[m - 1] * x[A.idx(A.n_r - 1, j)];
                thomas(lo.data(), di.data(), up.data(), rhs.data(), m, scratch.data());
                for (int q = 0; q < m; ++q) {
                    std::size_t p = A.idx(q + 1, j);
                    x[p] += omega * (rhs[q] - x[p]);
                }
            }
        }
    }
}

double weighted_dot(const std::vector<double>& ring_weight, int n_theta, const std::vector<double>& x,
                    const std::vector<double>& y) {
    const int n_r = static_cast<int>(ring_weight.size());
    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (int i = 1; i < n_r - 1; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            std::size_t p = static_cast<std::size_t>(i) * n_theta + j;
            acc += x[p] * y[p];
        }
        total += ring_weight[i] * acc;
    }
    return total;
}

}  // namespace hypflow::kernels::omp
