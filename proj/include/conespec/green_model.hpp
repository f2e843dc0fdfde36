#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace conespec::green {

// Evaluable model of the three-zone gradient bound for the Green's kernel of
// the Lame/Stokes system near a conical boundary point. The zones split the
// boundary by the ratio |xi| / |x|; each carries a homogeneous bound of total
// degree 1-n, so the model inherits the kernel's cone scaling
// g(x, xi) = |x|^{2-n} g(x/|x|, xi/|x|).
struct KernelBoundModel {
    int n;
    double alpha;      // decay exponent in (0, 1], min{1, t(M)} when built from a strip report
    double c = 1.0;    // bound constant; property tests run with 1
    double delta = 1.0;  // radius of the cone-shaped neighborhood of the vertex

    KernelBoundModel(int n_, double alpha_, double c_ = 1.0, double delta_ = 1.0)
        : n(n_), alpha(alpha_), c(c_), delta(delta_) {
        if (n_ < 3) throw std::domain_error("KernelBoundModel: n must be >= 3");
        if (!(alpha_ > 0.0) || alpha_ > 1.0)
            throw std::domain_error("KernelBoundModel: alpha must lie in (0, 1]");
        if (!(c_ > 0.0)) throw std::domain_error("KernelBoundModel: c must be positive");
        if (!(delta_ > 0.0)) throw std::domain_error("KernelBoundModel: delta must be positive");
    }

    // Negative control for the homogeneity self-test: perturbs the far-field
    // exponent so the scaling identity must fail.
    KernelBoundModel tampered() const {
        KernelBoundModel m = *this;
        m.tamper_ = 1.0;
        return m;
    }
    double tamper() const { return tamper_; }

  private:
    double tamper_ = 0.0;
};

enum class Zone { E1, E2, E3 };

// E1: 2|x| < |xi| (far field), E3: 2|xi| < |x| (vertex side), E2: the closed
// middle band |x|/2 <= |xi| <= 2|x|. The closed band makes the three zones
// tile every pair exactly once.
Zone classify_zone(double x_norm, double xi_norm);

enum class E2Variant { NormalDerivative, RawGradient };

// Pointwise bound on |grad_xi g(x, xi)|:
//   E1: c |x|^alpha |xi|^{-(alpha+n-1)}
//   E2: c R(x) / |x-xi|^n   (normal-derivative form; raw form c |x-xi|^{-(n-1)})
//   E3: c |xi|^{alpha-1} |x|^{-(alpha+n-2)}
double kernel_gradient_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double r_x,
                             const KernelBoundModel& model,
                             E2Variant variant = E2Variant::NormalDerivative);

// True when bound(s x, s xi, s R) = s^{1-n} bound(x, xi, R) to 1e-12 relative;
// the scaling consequence of the kernel's cone homogeneity. Fails for
// tampered models by construction.
bool homogeneity_identity_check(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double s,
                                const KernelBoundModel& model, double r_x = 0.5);

}  // namespace conespec::green
