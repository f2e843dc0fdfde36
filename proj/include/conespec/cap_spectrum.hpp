#pragma once

#include <complex>
#include <optional>
#include <string>

#include "conespec/config.hpp"
#include "conespec/tridiagonal.hpp"

namespace conespec::spectra {

/// Axisymmetric spherical cap {omega : colatitude < theta0} on S^{n-1}, n >= 3.
struct CapDomain {
    int dim;        // ambient dimension n
    double theta0;  // opening angle, strictly inside (0, pi)

    CapDomain(int n, double theta0_) : dim(n), theta0(theta0_) {
        if (n < 3) throw std::domain_error("CapDomain: dimension must be >= 3");
        if (!(theta0_ > 0.0) || !(theta0_ < 3.14159265358979323846))
            throw std::domain_error("CapDomain: opening angle must lie strictly in (0, pi)");
    }
};

struct EigenResult {
    double eigenvalue;  // value of -Laplace-Beltrami on the cap, mode-restricted
    double M_exponent;  // positive root of M(M+n-2) = eigenvalue
    double residual;    // discrete eigen-residual at the finest level
    int mode;
};

enum class ConstraintKind { MeanZero, UnconstrainedMode };

struct ThetaResult {
    double theta_omega;
    std::optional<double> theta_omega_lambda;
    int attaining_mode;
    ConstraintKind constraint_kind;
    bool mode_range_warning;  // minimum attained at the end of the searched mode range
};

/// |S^d|, the surface measure of the unit d-sphere.
double unit_sphere_area(int d);

/// Surface measure of the cap, |S^{n-2}| * int_0^theta0 sin^{n-2}.
double cap_area(const CapDomain& cap);

/// Unique nonnegative root M of M(M+n-2) = eigenvalue.
double exponent_M(double eigenvalue, int n);

// Smallest Dirichlet eigenvalue of -Laplace-Beltrami on the cap restricted to
// the given azimuthal mode (separated S^{n-2} harmonic of degree `mode`).
// The global first eigenvalue is the mode-0 value: the axisymmetric ground
// state, since higher modes add the nonnegative angular momentum potential.
// Finite-difference results are Richardson-extrapolated across
// cfg.richardson_levels grid doublings; spectral collocation converges
// exponentially and ignores the level count.
EigenResult dirichlet_eigenvalue_cap(const CapDomain& cap, int mode,
                                     const DiscretizationConfig& cfg);

// Theta(cap): infimum of the Dirichlet energy over mean-zero unit-norm H^1_0
// functions. Evaluated as the minimum of (a) the axisymmetric problem with the
// mean-zero constraint imposed exactly on the discrete quadratic form through
// the bordered Lagrange system, and (b) the unconstrained first Dirichlet
// eigenvalue of each azimuthal mode in [1, cfg.max_azimuthal_mode], whose
// eigenfunctions have zero mean automatically.
ThetaResult theta_omega(const CapDomain& cap, const DiscretizationConfig& cfg);

/// Theta of the closed sphere S^{n-1} (no boundary condition); equals n-1.
ThetaResult theta_sphere(int n, const DiscretizationConfig& cfg);

// Lambda-dependent constrained minimum: for nu < 1/2 the smaller of
// theta_omega and (3-4nu-Re l)|l+n-1|^2 / ((1-2nu)(2 Re l+n-2)); for nu = 1/2
// the constraint decouples from lambda and the value is theta_omega itself.
// The cap measure cancels between the two factors of the second branch and is
// accepted only for interface symmetry with the derivation.
double theta_omega_lambda(double theta_omega, std::complex<double> lambda, int n, double nu,
                          double cap_area);

// --- internals shared with the pencil assembly and the tests ---

struct ScalarOperator {
    lin::SymTridiag A;       // unscaled Sturm-Liouville form
    std::vector<double> w;   // positive cell weights (h * sin^{n-2})
    double h = 0.0;
    lin::SymTridiag symmetrized() const;  // W^{-1/2} A W^{-1/2}
};

// -(sin^k v')'/sin^k + mu v/sin^2 on (0, length), cell-centered conservative
// form; natural closure at the pole faces, Dirichlet at the right face unless
// `closed` (then both ends are poles of the full sphere).
ScalarOperator assemble_mode_operator(int n, double length, int mode, int cells, bool closed);

struct SpectralEigen {
    double eigenvalue;
    double residual;
};
/// Collocation eigensolve on the Gegenbauer form in x = cos(theta).
SpectralEigen spectral_cap_eigenvalue(int n, double theta0, int mode, int nodes, bool closed);

}  // namespace conespec::spectra
