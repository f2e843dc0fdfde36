#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <string>
#include <vector>

#include "conespec/cap_spectrum.hpp"
#include "conespec/config.hpp"

namespace conespec::pencil {

using cd = std::complex<double>;
using SparseC = Eigen::SparseMatrix<cd>;

struct MaterialParams {
    double nu;
    explicit MaterialParams(double nu_) : nu(nu_) {
        if (nu_ > 0.5) throw std::domain_error("MaterialParams: nu must be <= 1/2");
    }
    bool is_stokes() const { return nu == 0.5; }
};

struct PhiContext {
    int n;
    double nu;
    double M;
    PhiContext(int n_, double nu_, double M_) : n(n_), nu(nu_), M(M_) {
        if (n_ < 3) throw std::domain_error("PhiContext: n must be >= 3");
        if (nu_ > 0.5) throw std::domain_error("PhiContext: nu must be <= 1/2");
        if (!(M_ > 0.0)) throw std::domain_error("PhiContext: M must be positive");
    }
};

/// phi(t) = (t+1)(t+n-1)(2t+n-2) - (3-4nu-t)(M-t)(M+t+n-2).
double phi_eval(double t, const PhiContext& ctx);

/// Right-hand side (n-1)(2t+n-2) of the root equation.
double phi_rhs(double t, int n);

// Smallest root of phi(t) = (n-1)(2t+n-2) in (-(n-2)/2, M), located by a dense
// sign scan (1e4 subintervals) and bisection. The root is always positive;
// a missing bracket or a sign change at nonpositive t indicates a bug and is
// reported as an internal error with sampled values.
double t_of_M(const PhiContext& ctx);

struct StripReport {
    double t_of_M;
    double alpha;      // min{1, t(M)}
    double halfwidth;  // min{1, t(M)} + (n-2)/2
    double p_min;      // (n-1)/(alpha + n-2)
    static StripReport from_t(int n, double t);
};

StripReport strip_report(const PhiContext& ctx);

enum class PencilForm {
    Auto,          // mixed for nu = 1/2, displacement otherwise
    Displacement,  // velocity unknowns only; rejects nu = 1/2
    Mixed          // velocity + pressure with the divergence constraint row
};

struct FieldBlock {
    std::string name;  // "u_r", "u_theta", "u_sigma", "u_toroidal", "p"
    int offset;
    int size;
};

// One azimuthal mode of the operator pencil on the cap cross-section,
// discretized on cell-centered colatitude nodes (velocities, second order)
// with pressure staggered on interior faces in the mixed form. The mode-m
// subspace splits into the coupled (u_r, u_theta, u_sigma) block driven by a
// degree-m scalar harmonic of S^{n-2} and, where the cross-section carries
// them, a decoupled toroidal block (divergence-free tangential fields);
// both are assembled into one block-diagonal matrix.
struct PencilAssembly {
    cd lambda;
    int mode;
    int n;
    double theta0;
    double nu;
    int cells;
    double h;
    PencilForm form;
    std::vector<FieldBlock> layout;
    SparseC matrix;

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
    int dim() const { return static_cast<int>(matrix.rows()); }
    const FieldBlock* block(const std::string& name) const;
};

PencilAssembly assemble_pencil(const spectra::CapDomain& cap, const MaterialParams& mat,
                               cd lambda, int mode, const DiscretizationConfig& cfg,
                               PencilForm form = PencilForm::Auto);

// Samples separated fields (functions of colatitude) into the assembly's
// unknown vector; used by the analytic-solution checks and pressure recovery.
Eigen::VectorXcd sample_fields(const PencilAssembly& asm_,
                               const std::function<cd(double)>& u_r,
                               const std::function<cd(double)>& u_theta,
                               const std::function<cd(double)>& u_sigma,
                               const std::function<cd(double)>& p);

struct SigmaEstimate {
    double sigma_min;      // smallest singular value (mass-weighted in min_singular_value)
    double sigma_max;
    double sigma_min_rel;  // sigma_min / sigma_max
};

// Smallest singular value of the pencil matrix under the mass-weighted
// similarity W^{1/2} A W^{-1/2}; the reciprocal discrete resolvent norm on
// L^2 of the cross-section, stable under mesh refinement away from pencil
// eigenvalues and vanishing at them. sigma_max and the ratio are reported
// alongside.
SigmaEstimate min_singular_value(const PencilAssembly& asm_);

/// Raw (unweighted) singular extremes of a sparse matrix; deterministic start.
SigmaEstimate sigma_extremes(const SparseC& a);

/// Dense SVD reference for validation (O(dim^3), test-sized problems only).
double sigma_min_rel_dense(const Eigen::MatrixXcd& a);

struct ScanPoint {
    cd lambda;
    double sigma_min;  // mass-weighted, see min_singular_value
    int worst_mode;
};

struct ScanReport {
    StripReport strip;
    int n;
    double theta0;
    double nu;
    int grid_re;
    int grid_im;
    int max_mode;
    int mesh;
    double threshold;
    double im_halfwidth;
    double shrink;  // strip coverage margin (0.99 of the halfwidth)
    std::vector<ScanPoint> points;       // row-major over (re, im)
    std::vector<int> flagged;            // indices into points with sigma below threshold
    double control_sigma;                // positive control at lambda = 1, mode 1
    double computed_M;
};

// Calibrated so the lambda = 1 positive control at the coarsest default mesh
// (64) sits well below it while interior strip values stay two decades above.
inline constexpr double kDefaultSigmaThreshold = 1e-2;

// Relative sigma_min over a grid_re x grid_im lattice covering the
// eigenvalue-free strip shrunk by 1%, minimized over modes 0..max_mode.
// Deterministic given inputs; points below the threshold are flagged. The
// positive control at lambda = 1 (a true pencil eigenvalue on the hemisphere,
// outside the strip) is evaluated and logged for threshold calibration.
ScanReport strip_scan(const spectra::CapDomain& cap, const MaterialParams& mat, int grid_re,
                      int grid_im, const DiscretizationConfig& cfg, int max_mode = 4,
                      double threshold = kDefaultSigmaThreshold, double im_halfwidth = 2.0);

// Pressure recovery from the radial velocity trace:
//   p = -(3-4nu-lambda)^{-1} (Laplace-Beltrami u_r + (lambda+1)(lambda+n-1) u_r),
// applied nodewise with the discrete mode-m Laplace-Beltrami operator.
Eigen::VectorXcd pressure_from_ur(const Eigen::VectorXcd& ur, cd lambda, int n, double nu,
                                  const spectra::CapDomain& cap, int mode,
                                  const DiscretizationConfig& cfg);

}  // namespace conespec::pencil
