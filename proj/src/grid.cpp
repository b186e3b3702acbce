#include "hypflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hypflow {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

PolarGrid::PolarGrid(double a, double rho_in, double rho_out, int n_r, int n_theta)
    : a_(Curvature(a).a), n_r_(n_r), n_theta_(n_theta) {
    if (n_r < 16) throw DomainError("PolarGrid: n_r must be at least 16");
    if (n_theta < 16 || !is_power_of_two(n_theta)) throw DomainError("PolarGrid: n_theta must be a power of two >= 16");
    if (!(rho_in > 0.0) || !(rho_out > rho_in)) throw DomainError("PolarGrid: need 0 < rho_in < rho_out");
    if (!(ball_radius_in_chart(rho_out, Curvature(a)) < 1.0 - kChartEdgeTolerance))
        throw DomainError("PolarGrid: truncation circle too close to the ideal boundary");

    h_ = (rho_out - rho_in) / (n_r - 1);
    k_ = 2.0 * std::numbers::pi / n_theta;
    rho_.resize(n_r);
    r_.resize(n_r);
    lambda_.resize(n_r);
    s_.resize(n_r);
    dlog_s_.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
        double rho = (i == n_r - 1) ? rho_out : rho_in + i * h_;
        rho_[i] = rho;
        r_[i] = std::tanh(0.5 * a_ * rho);
        lambda_[i] = conformal_factor_r(r_[i], Curvature(a_));
        s_[i] = std::sinh(a_ * rho) / a_;
        dlog_s_[i] = laplacian_of_distance(rho, Curvature(a_));
    }
    cos_.resize(n_theta);
    sin_.resize(n_theta);
    for (int j = 0; j < n_theta; ++j) {
        cos_[j] = std::cos(j * k_);
        sin_[j] = std::sin(j * k_);
    }
}

std::shared_ptr<const PolarGrid> PolarGrid::geodesic(double a, double rho_in, double rho_out, int n_r, int n_theta) {
    return std::make_shared<const PolarGrid>(a, rho_in, rho_out, n_r, n_theta);
}

std::shared_ptr<const PolarGrid> PolarGrid::chart(double a, double r_in, double r_out, int n_r, int n_theta) {
    if (!(r_in > 0.0 && r_in < r_out && r_out < 1.0)) throw DomainError("PolarGrid: need 0 < r_in < r_out < 1");
    Curvature c(a);
    return geodesic(a, rho_of_r(r_in, c), rho_of_r(r_out, c), n_r, n_theta);
}

int PolarGrid::ring_below(double rho) const {
    int i = static_cast<int>(std::floor((rho - rho_in()) / h_));
    return std::clamp(i, 0, n_r_ - 2);
}

bool PolarGrid::contains_rho(double rho) const {
    double slack = 1e-12 * std::max(1.0, rho_out());
    return rho >= rho_in() - slack && rho <= rho_out() + slack;
}

bool same_grid(const PolarGrid& g1, const PolarGrid& g2) {
    return g1.a() == g2.a() && g1.n_r() == g2.n_r() && g1.n_theta() == g2.n_theta() &&
           g1.rho_in() == g2.rho_in() && g1.rho_out() == g2.rho_out();
}

}  // namespace hypflow
