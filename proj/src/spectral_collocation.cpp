#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "conespec/cap_spectrum.hpp"

namespace conespec::spectra {

namespace {

// Chebyshev-Gauss-Lobatto nodes (descending) and the standard first-derivative
// collocation matrix with the negative-sum-trick diagonal.
void chebyshev_matrix(int n, Eigen::VectorXd& y, Eigen::MatrixXd& d) {
    y.resize(n);
    d.resize(n, n);
    for (int j = 0; j < n; ++j) y(j) = std::cos(std::numbers::pi * j / (n - 1));
    auto c = [n](int i) { return (i == 0 || i == n - 1) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = (c(i) / c(j)) * sign / (y(i) - y(j));
            rowsum += d(i, j);
        }
        d(i, i) = -rowsum;
    }
}

}  // namespace

// Eigenvalues in x = cos(theta). Substituting v = (1-x^2)^{m/2} g removes the
// square-root branch of higher azimuthal modes; g then satisfies
//   -(1-x^2) g'' + (2m+n-1) x g' + m(m+n-2) g = Lambda g,
// whose x=1 (and x=-1 for the closed sphere) rows degenerate to exact
// regularity conditions, so the pole needs no boundary treatment.
SpectralEigen spectral_cap_eigenvalue(int n, double theta0, int mode, int nodes, bool closed) {
    if (nodes < 16) nodes = 16;
    const double x0 = closed ? -1.0 : std::cos(theta0);
    Eigen::VectorXd y;
    Eigen::MatrixXd d;
    chebyshev_matrix(nodes, y, d);
    const double a = 0.5 * (1.0 - x0), b = 0.5 * (1.0 + x0);
    Eigen::VectorXd x = a * y + Eigen::VectorXd::Constant(nodes, b);
    x(0) = 1.0;
    if (closed) x(nodes - 1) = -1.0;
    Eigen::MatrixXd dx = d / a;
    Eigen::MatrixXd d2 = dx * dx;

    const double m = mode;
    const double zeroth = m * (m + n - 2.0);
    Eigen::MatrixXd op(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
        const double w2 = 1.0 - x(i) * x(i);
        op.row(i) = -w2 * d2.row(i) + (2.0 * m + n - 1.0) * x(i) * dx.row(i);
        op(i, i) += zeroth;
    }
    const int dim = closed ? nodes : nodes - 1;  // drop the Dirichlet row/column at x = x0
    Eigen::MatrixXd reduced = op.topLeftCorner(dim, dim);

    Eigen::EigenSolver<Eigen::MatrixXd> es(reduced);
    if (es.info() != Eigen::Success)
        throw EigensolveError("spectral_cap_eigenvalue: dense eigensolve failed", 1.0);
    double best = std::numeric_limits<double>::max();
    int best_i = -1;
    for (int i = 0; i < dim; ++i) {
        const auto ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > 1e-8 * (1.0 + std::abs(ev.real()))) continue;
        if (ev.real() < best && ev.real() > -1e-6) {
            best = ev.real();
            best_i = i;
        }
    }
    if (best_i < 0)
        throw EigensolveError("spectral_cap_eigenvalue: no real eigenvalue found", 1.0);
    Eigen::VectorXd g = es.eigenvectors().col(best_i).real();
    if (g.norm() == 0.0) g = es.eigenvectors().col(best_i).imag();
    g.normalize();
    const double opscale = reduced.cwiseAbs().rowwise().sum().maxCoeff();
    const double res = (reduced * g - best * g).norm() / std::max({1.0, std::abs(best), opscale});
    return {best, res};
}

}  // namespace conespec::spectra
