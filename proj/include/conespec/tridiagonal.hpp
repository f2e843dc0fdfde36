#pragma once

#include <vector>

namespace conespec::lin {

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;
    int size() const { return static_cast<int>(diag.size()); }
};

/// Number of eigenvalues strictly below x (Sturm sequence count).
int count_below(const SymTridiag& t, double x);

/// k-th smallest eigenvalue (k 0-based) by bisection, to near machine accuracy.
double eigenvalue_k(const SymTridiag& t, int k);

/// Solve (T - shift I) x = rhs with partial-pivoting tridiagonal LU.
std::vector<double> solve_shifted(const SymTridiag& t, double shift, std::vector<double> rhs);

/// Eigenvector for an isolated eigenvalue via inverse iteration; unit 2-norm.
std::vector<double> inverse_iteration(const SymTridiag& t, double lambda, int iters = 3);

/// ||T v - lambda v||_2 for a unit vector v, scaled by max(1, |lambda|).
double eigen_residual(const SymTridiag& t, double lambda, const std::vector<double>& v);

struct ConstrainedMin {
    double value = 0.0;
    bool at_unconstrained = false;  // constraint was inactive (ground state already feasible)
    double secular_residual = 0.0;
};

// Smallest eigenvalue of T restricted to the hyperplane {u : d.u = 0}.
// This is the Schur complement (secular-equation) solve of the bordered
// Lagrange system [[T, d],[d^T, 0]]; the root is bracketed by the two lowest
// unconstrained eigenvalues, which interlace the constrained spectrum.
ConstrainedMin constrained_smallest(const SymTridiag& t, const std::vector<double>& d);

}  // namespace conespec::lin
