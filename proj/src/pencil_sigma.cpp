#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

#include "conespec/parallel.hpp"
#include "conespec/pencil.hpp"

namespace conespec::pencil {

namespace {

Eigen::VectorXcd deterministic_start(int n) {
    Eigen::VectorXcd v(n);
    std::uint64_t state = 0xc0ffee123ULL;
    for (int i = 0; i < n; ++i) v(i) = cd(uniform01(state) - 0.5, uniform01(state) - 0.5);
    v.normalize();
    return v;
}

// Surface-measure weight per unknown/equation row: cell measure for velocity
// and toroidal rows, face measure for the staggered pressure/constraint rows.
Eigen::VectorXd row_weights(const PencilAssembly& a) {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(a.dim());
    const int k = a.n - 2;
    for (const auto& b : a.layout) {
        for (int i = 0; i < b.size; ++i) {
            const double theta = (b.name == "p") ? (i + 1) * a.h : (i + 0.5) * a.h;
            w(b.offset + i) = a.h * std::pow(std::sin(theta), k);
        }
    }
    return w;
}

}  // namespace

SigmaEstimate sigma_extremes(const SparseC& a_in) {
    SparseC a = a_in;
    a.makeCompressed();
    const int n = static_cast<int>(a.rows());

    // largest singular value: power iteration on A* A
    Eigen::VectorXcd v = deterministic_start(n);
    double smax = 0.0;
    for (int it = 0; it < 48; ++it) {
        Eigen::VectorXcd w = a * v;
        w = a.adjoint() * w;
        const double nrm = w.norm();
        if (nrm == 0.0) break;
        smax = std::sqrt(nrm);
        v = w / nrm;
    }
    if (smax == 0.0) return {0.0, 0.0, 0.0};

    // smallest singular value: inverse power iteration on (A^-1)(A^-*)
    Eigen::SparseLU<SparseC> lu(a);
    if (lu.info() != Eigen::Success) return {0.0, 0.0, smax};
    SparseC ah = a.adjoint();
    ah.makeCompressed();
    Eigen::SparseLU<SparseC> luh(ah);
    if (luh.info() != Eigen::Success) return {0.0, 0.0, smax};

    Eigen::VectorXcd u = deterministic_start(n);
    double rho = 0.0;
    for (int it = 0; it < 64; ++it) {
        Eigen::VectorXcd w = luh.solve(u);
        w = lu.solve(w);
        const double nrm = w.norm();
        if (!std::isfinite(nrm) || nrm == 0.0) return {0.0, 0.0, smax};
        const double rho_new = nrm;
        u = w / nrm;
        if (it > 8 && std::abs(rho_new - rho) <= 1e-12 * rho_new) {
            rho = rho_new;
            break;
        }
        rho = rho_new;
    }
    const double smin = 1.0 / std::sqrt(rho);
    return {smin, smax, smin / smax};
}

// The certificate quantity is sigma_min of the mass-weighted similarity
// W^{1/2} A W^{-1/2}: the reciprocal of the discrete resolvent norm on
// L^2(surface measure). Unlike sigma_min / sigma_max (whose denominator grows
// like h^-2 with the operator norm), it converges under refinement to a
// positive limit at nonsingular lambda and to zero at pencil eigenvalues.
SigmaEstimate min_singular_value(const PencilAssembly& asm_) {
    for (int k = 0; k < asm_.matrix.outerSize(); ++k)
        for (SparseC::InnerIterator it(asm_.matrix, k); it; ++it)
            if (!std::isfinite(std::abs(it.value())))
                throw std::runtime_error(
                    "min_singular_value: assembled matrix has non-finite entries");
    const Eigen::VectorXd w = row_weights(asm_);
    SparseC b = asm_.matrix;
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseC::InnerIterator it(b, k); it; ++it)
            it.valueRef() *= std::sqrt(w(it.row()) / w(it.col()));
    return sigma_extremes(b);
}

double sigma_min_rel_dense(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

ScanReport strip_scan(const spectra::CapDomain& cap, const MaterialParams& mat, int grid_re,
                      int grid_im, const DiscretizationConfig& cfg, int max_mode,
                      double threshold, double im_halfwidth) {
    cfg.validate();
    if (grid_re < 1 || grid_im < 1) throw std::invalid_argument("strip_scan: grid must be >= 1x1");

    const auto ground = spectra::dirichlet_eigenvalue_cap(cap, 0, cfg);
    const PhiContext ctx(cap.dim, mat.nu, ground.M_exponent);
    const StripReport strip = strip_report(ctx);

    ScanReport rep;
    rep.strip = strip;
    rep.n = cap.dim;
    rep.theta0 = cap.theta0;
    rep.nu = mat.nu;
    rep.grid_re = grid_re;
    rep.grid_im = grid_im;
    rep.max_mode = max_mode;
    rep.mesh = cfg.grid_points;
    rep.threshold = threshold;
    rep.im_halfwidth = im_halfwidth;
    rep.shrink = 0.99;
    rep.computed_M = ground.M_exponent;

    const double center = -0.5 * (cap.dim - 2.0);
    const double w = strip.halfwidth * rep.shrink;
    rep.points.resize(static_cast<std::size_t>(grid_re) * grid_im);

    parallel_for(grid_re * grid_im, [&](int idx) {
        const int i = idx / grid_im, j = idx % grid_im;
        const double re = (grid_re == 1) ? center : center - w + 2.0 * w * i / (grid_re - 1.0);
        const double im =
            (grid_im == 1) ? 0.0 : -im_halfwidth + 2.0 * im_halfwidth * j / (grid_im - 1.0);
        const cd lambda(re, im);
        double best = std::numeric_limits<double>::max();
        int worst_mode = 0;
        for (int m = 0; m <= max_mode; ++m) {
            const auto a = assemble_pencil(cap, mat, lambda, m, cfg);
            const double s = min_singular_value(a).sigma_min;
            if (s < best) {
                best = s;
                worst_mode = m;
            }
        }
        rep.points[idx] = {lambda, best, worst_mode};
    });

    for (int idx = 0; idx < static_cast<int>(rep.points.size()); ++idx)
        if (rep.points[idx].sigma_min < threshold) rep.flagged.push_back(idx);

    // positive control: the hemisphere shear flow makes lambda = 1 a true
    // pencil eigenvalue in mode 1 (outside the strip); its sigma calibrates
    // the threshold and must sink under refinement.
    rep.control_sigma =
        min_singular_value(assemble_pencil(cap, mat, cd(1.0, 0.0), 1, cfg)).sigma_min;
    return rep;
}

}  // namespace conespec::pencil
