#include "conespec/cap_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace conespec {

namespace {
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return simpson_rec(f, a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

}  // namespace conespec

namespace conespec::spectra {

using std::numbers::pi;

double unit_sphere_area(int d) {
    if (d < 0) throw std::invalid_argument("unit_sphere_area: negative dimension");
    return 2.0 * std::pow(pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

double cap_area(const CapDomain& cap) {
    const int k = cap.dim - 2;
    const double colat = adaptive_simpson(
        [k](double t) { return std::pow(std::sin(t), k); }, 0.0, cap.theta0, 1e-13);
    return unit_sphere_area(cap.dim - 2) * colat;
}

double exponent_M(double eigenvalue, int n) {
    if (eigenvalue < 0.0) throw std::domain_error("exponent_M: eigenvalue must be nonnegative");
    const double b = n - 2.0;
    return 0.5 * (-b + std::sqrt(b * b + 4.0 * eigenvalue));
}

lin::SymTridiag ScalarOperator::symmetrized() const {
    lin::SymTridiag b;
    const int n = A.size();
    b.diag.resize(n);
    b.off.resize(n - 1);
    for (int i = 0; i < n; ++i) b.diag[i] = A.diag[i] / w[i];
    for (int i = 0; i + 1 < n; ++i) b.off[i] = A.off[i] / std::sqrt(w[i] * w[i + 1]);
    return b;
}

ScalarOperator assemble_mode_operator(int n, double length, int mode, int cells, bool closed) {
    const int k = n - 2;
    const double mu = static_cast<double>(mode) * (mode + n - 3);
    const double h = length / cells;
    ScalarOperator op;
    op.h = h;
    op.A.diag.assign(cells, 0.0);
    op.A.off.assign(cells - 1, 0.0);
    op.w.assign(cells, 0.0);
    auto face = [&](int j) { return std::pow(std::sin(j * h), k); };
    for (int i = 0; i < cells; ++i) {
        const double theta = (i + 0.5) * h;
        const double s = std::sin(theta);
        const double sk = std::pow(s, k);
        op.w[i] = h * sk;
        double diag = mu * h * std::pow(s, k - 2);
        if (i > 0) diag += face(i) / h;           // left face flux (zero at the pole, face(0)=0)
        if (i + 1 < cells) diag += face(i + 1) / h;
        if (i + 1 == cells) {
            if (!closed) diag += 2.0 * face(cells) / h;  // Dirichlet value at the outer face
            // closed sphere: sin(pi)=0 kills the outer flux, nothing to add
        }
        op.A.diag[i] = diag;
        if (i + 1 < cells) op.A.off[i] = -face(i + 1) / h;
    }
    return op;
}

namespace {

struct SolveOut {
    double eigenvalue;
    double residual;
};

SolveOut smallest_mode_eigenvalue(int n, double length, int mode, int cells, bool closed) {
    const ScalarOperator op = assemble_mode_operator(n, length, mode, cells, closed);
    const lin::SymTridiag b = op.symmetrized();
    const double lam = lin::eigenvalue_k(b, 0);
    const auto v = lin::inverse_iteration(b, lam);
    return {lam, lin::eigen_residual(b, lam, v)};
}

SolveOut extrapolated_mode_eigenvalue(int n, double length, int mode,
                                      const DiscretizationConfig& cfg, bool closed) {
    std::vector<double> levels;
    double residual = 0.0;
    for (int l = 0; l < cfg.richardson_levels; ++l) {
        const int cells = cfg.grid_points << l;
        const SolveOut s = smallest_mode_eigenvalue(n, length, mode, cells, closed);
        levels.push_back(s.eigenvalue);
        residual = s.residual;
    }
    return {extrapolate_sequence(levels), residual};
}

}  // namespace

EigenResult dirichlet_eigenvalue_cap(const CapDomain& cap, int mode,
                                     const DiscretizationConfig& cfg) {
    cfg.validate();
    if (mode < 0) throw std::invalid_argument("dirichlet_eigenvalue_cap: mode must be >= 0");
    if (mode > cfg.max_azimuthal_mode)
        throw std::invalid_argument("dirichlet_eigenvalue_cap: mode exceeds max_azimuthal_mode");

    SolveOut s{};
    if (cfg.scheme == Scheme::SpectralCollocation) {
        const SpectralEigen sp = spectral_cap_eigenvalue(cap.dim, cap.theta0, mode,
                                                         cfg.grid_points, /*closed=*/false);
        s = {sp.eigenvalue, sp.residual};
    } else {
        s = extrapolated_mode_eigenvalue(cap.dim, cap.theta0, mode, cfg, /*closed=*/false);
    }
    if (!(s.residual <= cfg.residual_tol) || !std::isfinite(s.eigenvalue))
        throw EigensolveError("dirichlet_eigenvalue_cap: eigensolve did not converge", s.residual);
    return {s.eigenvalue, exponent_M(s.eigenvalue, cap.dim), s.residual, mode};
}

namespace {

double constrained_axisymmetric(int n, double length, const DiscretizationConfig& cfg,
                                bool closed) {
    std::vector<double> levels;
    for (int l = 0; l < cfg.richardson_levels; ++l) {
        const int cells = cfg.grid_points << l;
        const ScalarOperator op = assemble_mode_operator(n, length, 0, cells, closed);
        const lin::SymTridiag b = op.symmetrized();
        // discrete mean: c_i = w_i; in symmetrized variables d_i = sqrt(w_i)
        std::vector<double> d(cells);
        for (int i = 0; i < cells; ++i) d[i] = std::sqrt(op.w[i]);
        levels.push_back(lin::constrained_smallest(b, d).value);
    }
    return extrapolate_sequence(levels);
}

ThetaResult theta_minimum(int n, double length, const DiscretizationConfig& cfg, bool closed) {
    cfg.validate();
    double best = constrained_axisymmetric(n, length, cfg, closed);
    int best_mode = 0;
    ConstraintKind kind = ConstraintKind::MeanZero;
    for (int m = 1; m <= cfg.max_azimuthal_mode; ++m) {
        double val;
        if (cfg.scheme == Scheme::SpectralCollocation && !closed) {
            val = spectral_cap_eigenvalue(n, length, m, cfg.grid_points, closed).eigenvalue;
        } else {
            val = extrapolated_mode_eigenvalue(n, length, m, cfg, closed).eigenvalue;
        }
        if (val < best) {
            best = val;
            best_mode = m;
            kind = ConstraintKind::UnconstrainedMode;
        }
    }
    return {best, std::nullopt, best_mode, kind, best_mode == cfg.max_azimuthal_mode};
}

}  // namespace

ThetaResult theta_omega(const CapDomain& cap, const DiscretizationConfig& cfg) {
    return theta_minimum(cap.dim, cap.theta0, cfg, /*closed=*/false);
}

ThetaResult theta_sphere(int n, const DiscretizationConfig& cfg) {
    if (n < 3) throw std::domain_error("theta_sphere: dimension must be >= 3");
    return theta_minimum(n, pi, cfg, /*closed=*/true);
}

double theta_omega_lambda(double theta_omega, std::complex<double> lambda, int n, double nu,
                          double /*cap_area*/) {
    if (nu > 0.5) throw std::domain_error("theta_omega_lambda: nu must be <= 1/2");
    const double re = lambda.real();
    if (!(2.0 * re + n - 2.0 > 0.0))
        throw std::invalid_argument(
            "theta_omega_lambda: lambda outside the considered half-strip (2 Re l + n - 2 <= 0)");
    if (nu == 0.5) return theta_omega;  // constraint no longer involves lambda
    if (re > 3.0 - 4.0 * nu)
        throw std::invalid_argument("theta_omega_lambda: requires Re lambda <= 3 - 4 nu");
    const double num = (3.0 - 4.0 * nu - re) * std::norm(lambda + std::complex<double>(n - 1.0, 0.0));
    const double den = (1.0 - 2.0 * nu) * (2.0 * re + n - 2.0);
    return std::min(theta_omega, num / den);
}

}  // namespace conespec::spectra
