#pragma once
/// Finite-difference weights on uniform and arbitrary node sets.

#include <vector>

namespace hypflow {

/// Fornberg's recursion: weights w[m][k] such that
/// f^(m)(x0) ~ sum_k w[m][k] f(nodes[k]) for m = 0..max_order.
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& nodes, int max_order);

/// Radial derivative stencils for n uniformly spaced rings with spacing h.
/// Interior rings use 5-point central formulas; the two rings nearest each
/// end use 6-point one-sided formulas, so both derivatives are fourth order
/// everywhere.
class RadialStencils {
public:
    RadialStencils(int n, double h);

    struct Row {
        int first;                 ///< index of the first node used
        std::vector<double> d1;    ///< first-derivative weights
        std::vector<double> d2;    ///< second-derivative weights
    };

    const Row& row(int i) const { return rows_[i]; }
    int size() const { return static_cast<int>(rows_.size()); }

private:
    std::vector<Row> rows_;
};

/// Periodic 5-point weights for spacing k.
struct PeriodicStencil {
    double d1[5];
    double d2[5];
    explicit PeriodicStencil(double k);
};

}  // namespace hypflow
