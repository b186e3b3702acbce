#include "hypflow/stencil.hpp"

#include <algorithm>
#include <stdexcept>

namespace hypflow {

std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x, int max_order) {
    const int n = static_cast<int>(x.size());
    if (n == 0 || max_order < 0) throw std::invalid_argument("fornberg_weights: empty stencil");
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, max_order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

RadialStencils::RadialStencils(int n, double h) {
    if (n < 6) throw std::invalid_argument("RadialStencils: need at least 6 rings");
    rows_.resize(n);
    for (int i = 0; i < n; ++i) {
        int first, count;
        if (i < 2) {
            first = 0;
            count = 6;
        } else if (i > n - 3) {
            first = n - 6;
            count = 6;
        } else {
            first = i - 2;
            count = 5;
        }
        std::vector<double> nodes(count);
        for (int q = 0; q < count; ++q) nodes[q] = static_cast<double>(first + q - i);
        auto w = fornberg_weights(0.0, nodes, 2);
        Row& row = rows_[i];
        row.first = first;
        row.d1.resize(count);
        row.d2.resize(count);
        for (int q = 0; q < count; ++q) {
            row.d1[q] = w[1][q] / h;
            row.d2[q] = w[2][q] / (h * h);
        }
    }
}

PeriodicStencil::PeriodicStencil(double k) {
    const double a1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    const double a2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    for (int q = 0; q < 5; ++q) {
        d1[q] = a1[q] / (12.0 * k);
        d2[q] = a2[q] / (12.0 * k * k);
    }
}

}  // namespace hypflow
