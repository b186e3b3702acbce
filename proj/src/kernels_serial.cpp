#include <stdexcept>

#include "hypflow/kernels.hpp"

namespace hypflow {

FivePointOperator::FivePointOperator(int nr, int nt) : n_r(nr), n_theta(nt) {
    if (nr < 3 || nt < 2 || nt % 2 != 0) throw std::invalid_argument("FivePointOperator: bad dimensions");
    std::size_t m = static_cast<std::size_t>(nr) * static_cast<std::size_t>(nt);
    c.assign(m, 1.0);
    n.assign(m, 0.0);
    s.assign(m, 0.0);
    e.assign(m, 0.0);
    w.assign(m, 0.0);
}

namespace kernels {

void thomas(const double* lower, const double* diag, const double* upper, double* rhs, int m, double* cp) {
    double beta = diag[0];
    rhs[0] /= beta;
    for (int q = 1; q < m; ++q) {
        cp[q] = upper[q - 1] / beta;
        beta = diag[q] - lower[q] * cp[q];
        rhs[q] = (rhs[q] - lower[q] * rhs[q - 1]) / beta;
    }
    for (int q = m - 2; q >= 0; --q) rhs[q] -= cp[q + 1] * rhs[q + 1];
}

namespace serial {

void apply(const FivePointOperator& A, const std::vector<double>& x, std::vector<double>& y) {
    const int nt = A.n_theta;
    y.resize(x.size());
    for (int j = 0; j < nt; ++j) {
        y[A.idx(0, j)] = x[A.idx(0, j)];
        y[A.idx(A.n_r - 1, j)] = x[A.idx(A.n_r - 1, j)];
    }
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
    for (int i = 1; i < A.n_r - 1; ++i)
        for (int j = 0; j < nt; ++j) {
            std::size_t p = A.idx(i, j);
            int jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
            double ax = A.c[p] * x[p] + A.n[p] * x[A.idx(i + 1, j)] + A.s[p] * x[A.idx(i - 1, j)] +
                        A.e[p] * x[A.idx(i, jp)] + A.w[p] * x[A.idx(i, jm)];
            double r = b[p] - ax;
            if (r < 0) r = -r;
            if (r > worst) worst = r;
        }
    return worst;
}

void rb_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b, double omega) {
    const int nt = A.n_theta;
    for (int color = 0; color < 2; ++color)
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

void zebra_line_sor_sweep(const FivePointOperator& A, std::vector<double>& x, const std::vector<double>& b,
                          double omega) {
    const int nt = A.n_theta;
    const int m = A.n_r - 2;
    std::vector<double> lo(m), di(m), up(m), rhs(m), scratch(m);
    for (int color = 0; color < 2; ++color)
        for (int j = color; j < nt; j += 2) {
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

double weighted_dot(const std::vector<double>& ring_weight, int n_theta, const std::vector<double>& x,
                    const std::vector<double>& y) {
    const int n_r = static_cast<int>(ring_weight.size());
    double total = 0.0;
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

}  // namespace serial
}  // namespace kernels
}  // namespace hypflow
