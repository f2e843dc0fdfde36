#include "conespec/green_model.hpp"

#include <cmath>

namespace conespec::green {

Zone classify_zone(double x_norm, double xi_norm) {
    if (!(x_norm > 0.0) || !(xi_norm > 0.0))
        throw std::domain_error("classify_zone: norms must be positive");
    if (2.0 * x_norm < xi_norm) return Zone::E1;
    if (2.0 * xi_norm < x_norm) return Zone::E3;
    return Zone::E2;
}

double kernel_gradient_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double r_x,
                             const KernelBoundModel& model, E2Variant variant) {
    const double xn = x.norm(), xin = xi.norm();
    const double sep = (x - xi).norm();
    if (sep == 0.0) throw std::domain_error("kernel_gradient_bound: x == xi is singular");
    if (r_x < 0.0) throw std::domain_error("kernel_gradient_bound: R(x) must be nonnegative");
    const double a = model.alpha;
    const int n = model.n;
    switch (classify_zone(xn, xin)) {
        case Zone::E1:
            return model.c * std::pow(xn, a) * std::pow(xin, -(a + n - 1.0) - model.tamper());
        case Zone::E2:
            if (variant == E2Variant::NormalDerivative)
                return model.c * r_x / std::pow(sep, n);
            return model.c * std::pow(sep, -(n - 1.0));
        case Zone::E3:
            return model.c * std::pow(xin, a - 1.0) * std::pow(xn, -(a + n - 2.0));
    }
    return 0.0;  // unreachable
}

bool homogeneity_identity_check(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double s,
                                const KernelBoundModel& model, double r_x) {
    if (!(s > 0.0)) throw std::domain_error("homogeneity_identity_check: s must be positive");
    const double base = kernel_gradient_bound(x, xi, r_x, model);
    const double scaled = kernel_gradient_bound(s * x, s * xi, s * r_x, model);
    const double expected = std::pow(s, 1.0 - model.n) * base;
    if (expected == 0.0) return scaled == 0.0;
    return std::abs(scaled - expected) <= 1e-12 * std::abs(expected);
}

}  // namespace conespec::green
