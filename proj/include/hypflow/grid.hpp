#pragma once
/// Annular tensor-product grid in the Poincare disk chart.
///
/// Rings are equally spaced in the geodesic radius rho, which clusters them in
/// chart radius toward the truncation circle where the conformal factor blows
/// up. Angles are uniform with a power-of-two count.

#include <cstddef>
#include <memory>
#include <vector>

#include "hypflow/hypgeom.hpp"

namespace hypflow {

class PolarGrid {
public:
    /// Build from geodesic radii of the obstacle and the truncation circle.
    static std::shared_ptr<const PolarGrid> geodesic(double a, double rho_in, double rho_out, int n_r,
                                                     int n_theta);
    /// Build from chart radii 0 < r_in < r_out < 1.
    static std::shared_ptr<const PolarGrid> chart(double a, double r_in, double r_out, int n_r, int n_theta);

    double a() const { return a_; }
    Curvature curvature() const { return Curvature(a_); }
    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    std::size_t size() const { return static_cast<std::size_t>(n_r_) * static_cast<std::size_t>(n_theta_); }
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta_) + static_cast<std::size_t>(j);
    }

    double rho_in() const { return rho_.front(); }
    double rho_out() const { return rho_.back(); }
    double r_in() const { return r_.front(); }
    double r_out() const { return r_.back(); }
    /// Radial spacing in rho and angular spacing.
    double h() const { return h_; }
    double k() const { return k_; }

    double rho(int i) const { return rho_[i]; }
    double r(int i) const { return r_[i]; }
    /// Conformal factor lambda on ring i.
    double lambda(int i) const { return lambda_[i]; }
    /// s = sinh(a rho)/a, the circumference radius; equals r * lambda.
    double s(int i) const { return s_[i]; }
    /// a coth(a rho), the Laplacian of the distance function.
    double dlog_s(int i) const { return dlog_s_[i]; }
    double theta(int j) const { return j * k_; }
    double cos_t(int j) const { return cos_[j]; }
    double sin_t(int j) const { return sin_[j]; }
    double y1(int i, int j) const { return r_[i] * cos_[j]; }
    double y2(int i, int j) const { return r_[i] * sin_[j]; }

    /// Largest ring index with rho(i) <= rho, clamped to [0, n_r-2].
    int ring_below(double rho) const;
    bool contains_rho(double rho) const;

    PolarGrid(double a, double rho_in, double rho_out, int n_r, int n_theta);

private:
    double a_;
    int n_r_, n_theta_;
    double h_, k_;
    std::vector<double> rho_, r_, lambda_, s_, dlog_s_, cos_, sin_;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

/// True when the two grids describe the same nodes.
bool same_grid(const PolarGrid& g1, const PolarGrid& g2);

}  // namespace hypflow
