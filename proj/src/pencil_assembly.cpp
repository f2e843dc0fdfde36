// Discretization of the Lame/Stokes operator pencil on an axisymmetric cap.
//
// The polar ansatz U = r^lambda (u_r e_r + u_omega), P = r^{lambda-1} p turns
// the system into ODEs in colatitude for each separated S^{n-2} harmonic Y of
// degree m (eigenvalue mu = m(m+n-3)). With u_omega = g Y e_theta + h W,
// where W is the L2-normalized gradient direction of Y scaled to unit length,
// the blocks below realize (k = n-2, C = cot, s = sin, ' = d/dtheta):
//
//   divergence   Div[g,h] = g' + k C g - sqrt(mu) h / s
//   gradient     Grad[q]  = (q', sqrt(mu) q / s)
//   scalar       Lap_mu[f] = f'' + k C f' - mu f / s^2
//   Hodge        -Dh[g,h] = ( -g'' - kCg' + (k+mu) g/s^2 - 2 sqrt(mu) c h/s^2,
//                             -h'' - kCh' + (1 + (mu-(k-2)c^2)/s^2) h - 2 sqrt(mu) c g/s^2 )
//
// Momentum equations (mixed form, valid for every nu <= 1/2):
//   radial:      -Lap_mu[f] - (lambda-1)(lambda+n-1) f + 2 Div[g,h] + (lambda-1) p = 0
//   tangential:  -Dh[g,h] - (lambda+1)(lambda+n-3)(g,h) - 2 Grad[f] + Grad[p] = 0
//   constraint:  (lambda+n-1) f + Div[g,h] + (1-2nu) p = 0
// Eliminating p for nu < 1/2 yields the displacement form with coefficients
//   a1 = (2-2nu)/(1-2nu) (lambda-1)(lambda+n-1),  a2 = (3-4nu-lambda)/(1-2nu),
//   a3 = (n+1-4nu+lambda)/(1-2nu).
// These coefficients are pinned by analytic solutions: the hemisphere shear
// flow (mode 1) and the degree-2 potential flow (mode 0) lie in the kernel in
// every dimension; both checks run in the test suite against this assembly.
//
// Pure toroidal sectors (divergence-free tangential harmonics of S^{n-2})
// decouple; their colatitude operator is the sigma-row with mu replaced by the
// Hodge eigenvalue kappa of the driving 1-form: kappa = 0 for n = 3 (m = 0
// only) and kappa = (m+1)(m+n-4) for n >= 4, m >= 1.

#include <Eigen/SparseCore>
#include <cmath>

#include "conespec/pencil.hpp"

namespace conespec::pencil {

namespace {

using SparseD = Eigen::SparseMatrix<double>;
using TripletC = Eigen::Triplet<cd>;
using TripletD = Eigen::Triplet<double>;

enum class RightClosure { Dirichlet, Extrapolate };

// -(s^k v')'/s^k in conservative cell-centered form; natural pole flux,
// Dirichlet or natural closure at the outer face.
SparseD sl_conservative(int n_cells, int k, double h, bool dirichlet_right) {
    std::vector<TripletD> t;
    auto face = [&](int j) { return std::pow(std::sin(j * h), k); };
    for (int i = 0; i < n_cells; ++i) {
        const double sk = std::pow(std::sin((i + 0.5) * h), k);
        double diag = 0.0;
        if (i > 0) {
            diag += face(i) / (h * h * sk);
            t.emplace_back(i, i - 1, -face(i) / (h * h * sk));
        }
        if (i + 1 < n_cells) {
            diag += face(i + 1) / (h * h * sk);
            t.emplace_back(i, i + 1, -face(i + 1) / (h * h * sk));
        } else if (dirichlet_right) {
            diag += 2.0 * face(n_cells) / (h * h * sk);
        }
        t.emplace_back(i, i, diag);
    }
    SparseD m(n_cells, n_cells);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

/// Central first derivative on cells with a parity ghost across the pole.
SparseD dtheta_cells(int n_cells, double h, int pole_parity, RightClosure rc) {
    std::vector<TripletD> t;
    const double inv2h = 1.0 / (2.0 * h);
    for (int i = 0; i < n_cells; ++i) {
        if (i == 0) {
            t.emplace_back(0, 1, inv2h);
            t.emplace_back(0, 0, -pole_parity * inv2h);
        } else if (i + 1 < n_cells) {
            t.emplace_back(i, i + 1, inv2h);
            t.emplace_back(i, i - 1, -inv2h);
        } else if (rc == RightClosure::Dirichlet) {
            // ghost reflects through the zero boundary value
            t.emplace_back(i, i, -inv2h);
            t.emplace_back(i, i - 1, -inv2h);
        } else {
            t.emplace_back(i, i, 1.0 / h);
            t.emplace_back(i, i - 1, -1.0 / h);
        }
    }
    SparseD m(n_cells, n_cells);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SparseD diag_matrix(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    std::vector<TripletD> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, d[i]);
    SparseD m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

/// Cell values of the two interior-face pressures averaged to the cell.
SparseD pressure_to_cells(int n_cells, bool even_at_pole) {
    // face j separates cells j-1 and j; DOFs live on faces 1..n_cells-1.
    std::vector<TripletD> t;
    auto add_face = [&](int cell, int face, double c) {
        if (face >= 1 && face <= n_cells - 1) {
            t.emplace_back(cell, face - 1, c);
        } else if (face == 0 && even_at_pole) {
            // even symmetry through the pole: p(0) = (4 p_1 - p_2)/3
            t.emplace_back(cell, 0, 4.0 / 3.0 * c);
            t.emplace_back(cell, 1, -1.0 / 3.0 * c);
        } else if (face == n_cells) {
            // linear extrapolation past the outer face
            t.emplace_back(cell, n_cells - 2, 2.0 * c);
            t.emplace_back(cell, n_cells - 3, -c);
        }
        // odd pole symmetry: p(0) = 0, nothing to add
    };
    for (int i = 0; i < n_cells; ++i) {
        add_face(i, i, 0.5);
        add_face(i, i + 1, 0.5);
    }
    SparseD m(n_cells, n_cells - 1);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

/// Face-difference pressure gradient evaluated at cells.
SparseD pressure_gradient(int n_cells, double h, bool even_at_pole) {
    std::vector<TripletD> t;
    auto add_face = [&](int cell, int face, double c) {
        if (face >= 1 && face <= n_cells - 1) {
            t.emplace_back(cell, face - 1, c);
        } else if (face == 0 && even_at_pole) {
            t.emplace_back(cell, 0, 4.0 / 3.0 * c);
            t.emplace_back(cell, 1, -1.0 / 3.0 * c);
        } else if (face == n_cells) {
            t.emplace_back(cell, n_cells - 2, 2.0 * c);
            t.emplace_back(cell, n_cells - 3, -c);
        }
    };
    for (int i = 0; i < n_cells; ++i) {
        add_face(i, i + 1, 1.0 / h);
        add_face(i, i, -1.0 / h);
    }
    SparseD m(n_cells, n_cells - 1);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

void add_block(std::vector<TripletC>& out, int row_off, int col_off, const SparseD& m, cd scale) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseD::InnerIterator it(m, k); it; ++it)
            out.emplace_back(row_off + static_cast<int>(it.row()),
                             col_off + static_cast<int>(it.col()), scale * it.value());
}

struct Geometry {
    std::vector<double> s, c, cot, inv_s, inv_s2;
};

Geometry cell_geometry(int n_cells, double h) {
    Geometry g;
    g.s.resize(n_cells);
    g.c.resize(n_cells);
    g.cot.resize(n_cells);
    g.inv_s.resize(n_cells);
    g.inv_s2.resize(n_cells);
    for (int i = 0; i < n_cells; ++i) {
        const double th = (i + 0.5) * h;
        g.s[i] = std::sin(th);
        g.c[i] = std::cos(th);
        g.cot[i] = g.c[i] / g.s[i];
        g.inv_s[i] = 1.0 / g.s[i];
        g.inv_s2[i] = 1.0 / (g.s[i] * g.s[i]);
    }
    return g;
}

bool has_toroidal_sector(int n, int mode) { return (n == 3) ? (mode == 0) : (mode >= 1); }

double toroidal_kappa(int n, int mode) {
    if (n == 3) return 0.0;                                  // harmonic angular 1-form
    return (mode + 1.0) * (mode + n - 4.0);                  // coexact Hodge eigenvalue on S^{n-2}
}

}  // namespace

const FieldBlock* PencilAssembly::block(const std::string& name) const {
    for (const auto& b : layout)
        if (b.name == name) return &b;
    return nullptr;
}

PencilAssembly assemble_pencil(const spectra::CapDomain& cap, const MaterialParams& mat, cd lambda,
                               int mode, const DiscretizationConfig& cfg, PencilForm form) {
    cfg.validate();
    if (mode < 0) throw std::invalid_argument("assemble_pencil: mode must be >= 0");
    if (form == PencilForm::Auto)
        form = mat.is_stokes() ? PencilForm::Mixed : PencilForm::Displacement;
    if (form == PencilForm::Displacement && mat.is_stokes())
        throw std::invalid_argument(
            "assemble_pencil: the displacement form divides by 1-2nu; request the mixed form "
            "for the Stokes case nu = 1/2");

    const int n = cap.dim;
    const int k = n - 2;
    const int N = cfg.grid_points;
    const double h = cap.theta0 / N;
    const double nu = mat.nu;
    const double mu = static_cast<double>(mode) * (mode + n - 3);
    const double rmu = std::sqrt(mu);
    const bool with_sigma = mode >= 1;
    const bool mixed = form == PencilForm::Mixed;
    const bool toroidal = has_toroidal_sector(n, mode);

    PencilAssembly out;
    out.lambda = lambda;
    out.mode = mode;
    out.n = n;
    out.theta0 = cap.theta0;
    out.nu = nu;
    out.cells = N;
    out.h = h;
    out.form = form;

    int off = 0;
    auto push_block = [&](const std::string& name, int size) {
        out.layout.push_back({name, off, size});
        off += size;
    };
    push_block("u_r", N);
    push_block("u_theta", N);
    if (with_sigma) push_block("u_sigma", N);
    if (mixed) push_block("p", N - 1);
    if (toroidal) push_block("u_toroidal", N);
    const int dim = off;

    const int of = out.block("u_r")->offset;
    const int og = out.block("u_theta")->offset;
    const int oh = with_sigma ? out.block("u_sigma")->offset : -1;
    const int op = mixed ? out.block("p")->offset : -1;
    const int ot = toroidal ? out.block("u_toroidal")->offset : -1;

    const Geometry geo = cell_geometry(N, h);
    const int pf = (mode % 2 == 0) ? 1 : -1;  // pole parity of scalar-type fields
    const int pg = -pf;                       // tangential components flip parity

    // component operators
    const SparseD slf = sl_conservative(N, k, h, true);
    const SparseD dth_f = dtheta_cells(N, h, pf, RightClosure::Dirichlet);
    const SparseD dth_g = dtheta_cells(N, h, pg, RightClosure::Dirichlet);

    std::vector<double> kcot(N), mu_s2(N), kmu_s2(N), hodge_hh(N), coupling(N), rmu_inv_s(N);
    for (int i = 0; i < N; ++i) {
        kcot[i] = k * geo.cot[i];
        mu_s2[i] = mu * geo.inv_s2[i];
        kmu_s2[i] = (k + mu) * geo.inv_s2[i];
        hodge_hh[i] = 1.0 + (mu - (k - 2) * geo.c[i] * geo.c[i]) * geo.inv_s2[i];
        coupling[i] = -2.0 * rmu * geo.c[i] * geo.inv_s2[i];
        rmu_inv_s[i] = rmu * geo.inv_s[i];
    }

    // Div[g,h] as per-source N x N blocks on cells
    SparseD div_g = dth_g + diag_matrix(kcot);
    SparseD div_h;
    if (with_sigma) {
        std::vector<double> d(N);
        for (int i = 0; i < N; ++i) d[i] = -rmu_inv_s[i];
        div_h = diag_matrix(d);
    }

    std::vector<TripletC> trips;
    trips.reserve(static_cast<std::size_t>(dim) * 12);

    const cd l = lambda;
    const cd zv = (l + 1.0) * (l + static_cast<double>(n) - 3.0);  // tangential zeroth coefficient

    // Hodge rows shared by both forms
    add_block(trips, og, og, sl_conservative(N, k, h, true), 1.0);
    add_block(trips, og, og, diag_matrix(kmu_s2), 1.0);
    for (int i = 0; i < N; ++i) trips.emplace_back(og + i, og + i, -zv);
    if (with_sigma) {
        add_block(trips, og, oh, diag_matrix(coupling), 1.0);
        add_block(trips, oh, og, diag_matrix(coupling), 1.0);
        add_block(trips, oh, oh, sl_conservative(N, k, h, true), 1.0);
        add_block(trips, oh, oh, diag_matrix(hodge_hh), 1.0);
        for (int i = 0; i < N; ++i) trips.emplace_back(oh + i, oh + i, -zv);
    }

    if (form == PencilForm::Displacement) {
        const double inv12 = 1.0 / (1.0 - 2.0 * nu);
        const cd a1 = (2.0 - 2.0 * nu) * inv12 * (l - 1.0) * (l + static_cast<double>(n) - 1.0);
        const cd a2 = (3.0 - 4.0 * nu - l) * inv12;
        const cd a3 = (static_cast<double>(n) + 1.0 - 4.0 * nu + l) * inv12;

        // radial momentum
        add_block(trips, of, of, slf, 1.0);
        add_block(trips, of, of, diag_matrix(mu_s2), 1.0);
        for (int i = 0; i < N; ++i) trips.emplace_back(of + i, of + i, -a1);
        add_block(trips, of, og, div_g, a2);
        if (with_sigma) add_block(trips, of, oh, div_h, a2);

        // -(1/(1-2nu)) Grad(Div), theta and sigma rows
        const SparseD dscal = dtheta_cells(N, h, pf, RightClosure::Extrapolate);
        add_block(trips, og, og, SparseD(dscal * div_g), -inv12);
        if (with_sigma) {
            add_block(trips, og, oh, SparseD(dscal * div_h), -inv12);
            const SparseD sdiag = diag_matrix(rmu_inv_s);
            add_block(trips, oh, og, SparseD(sdiag * div_g), -inv12);
            add_block(trips, oh, oh, SparseD(sdiag * div_h), -inv12);
        }

        // -a3 Grad(u_r)
        add_block(trips, og, of, dth_f, -a3);
        if (with_sigma) add_block(trips, oh, of, diag_matrix(rmu_inv_s), -a3);
    } else {
        const bool even_p = mode % 2 == 0;
        const SparseD pavg = pressure_to_cells(N, even_p);
        const SparseD pgrad = pressure_gradient(N, h, even_p);

        // radial momentum
        add_block(trips, of, of, slf, 1.0);
        add_block(trips, of, of, diag_matrix(mu_s2), 1.0);
        const cd zr = (l - 1.0) * (l + static_cast<double>(n) - 1.0);
        for (int i = 0; i < N; ++i) trips.emplace_back(of + i, of + i, -zr);
        add_block(trips, of, og, div_g, 2.0);
        if (with_sigma) add_block(trips, of, oh, div_h, 2.0);
        add_block(trips, of, op, pavg, l - 1.0);

        // tangential momentum
        add_block(trips, og, of, dth_f, -2.0);
        add_block(trips, og, op, pgrad, 1.0);
        if (with_sigma) {
            add_block(trips, oh, of, diag_matrix(rmu_inv_s), -2.0);
            add_block(trips, oh, op, SparseD(diag_matrix(rmu_inv_s) * pavg), 1.0);
        }

        // divergence constraint on interior faces
        for (int j = 1; j <= N - 1; ++j) {
            const int row = op + j - 1;
            const double th = j * h;
            const double cth = std::cos(th) / std::sin(th);
            const cd lr = (l + static_cast<double>(n) - 1.0) * 0.5;
            trips.emplace_back(row, of + j - 1, lr);
            trips.emplace_back(row, of + j, lr);
            trips.emplace_back(row, og + j, cd(1.0 / h + 0.5 * k * cth));
            trips.emplace_back(row, og + j - 1, cd(-1.0 / h + 0.5 * k * cth));
            if (with_sigma) {
                const double c = -0.5 * rmu / std::sin(th);
                trips.emplace_back(row, oh + j - 1, cd(c));
                trips.emplace_back(row, oh + j, cd(c));
            }
            trips.emplace_back(row, op + j - 1, cd(1.0 - 2.0 * nu));
        }
    }

    if (toroidal) {
        const double kappa = toroidal_kappa(n, mode);
        std::vector<double> tor_diag(N);
        for (int i = 0; i < N; ++i)
            tor_diag[i] = 1.0 + (kappa - (k - 2) * geo.c[i] * geo.c[i]) * geo.inv_s2[i];
        add_block(trips, ot, ot, sl_conservative(N, k, h, true), 1.0);
        add_block(trips, ot, ot, diag_matrix(tor_diag), 1.0);
        for (int i = 0; i < N; ++i) trips.emplace_back(ot + i, ot + i, -zv);
    }

    out.matrix.resize(dim, dim);
    out.matrix.setFromTriplets(trips.begin(), trips.end());
    out.matrix.makeCompressed();
    return out;
}

Eigen::VectorXcd sample_fields(const PencilAssembly& a, const std::function<cd(double)>& u_r,
                               const std::function<cd(double)>& u_theta,
                               const std::function<cd(double)>& u_sigma,
                               const std::function<cd(double)>& p) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(a.dim());
    const auto* bf = a.block("u_r");
    const auto* bg = a.block("u_theta");
    const auto* bh = a.block("u_sigma");
    const auto* bp = a.block("p");
    const auto* bt = a.block("u_toroidal");
    for (int i = 0; i < a.cells; ++i) {
        const double th = (i + 0.5) * a.h;
        v(bf->offset + i) = u_r(th);
        v(bg->offset + i) = u_theta(th);
        if (bh) v(bh->offset + i) = u_sigma(th);
        if (bt && !bh) v(bt->offset + i) = u_sigma(th);  // mode-0 tangential field is toroidal
    }
    if (bp)
        for (int j = 1; j <= a.cells - 1; ++j) v(bp->offset + j - 1) = p(j * a.h);
    return v;
}

Eigen::VectorXcd pressure_from_ur(const Eigen::VectorXcd& ur, cd lambda, int n, double nu,
                                  const spectra::CapDomain& cap, int mode,
                                  const DiscretizationConfig& cfg) {
    cfg.validate();
    const int N = cfg.grid_points;
    if (ur.size() != N)
        throw std::invalid_argument("pressure_from_ur: sample count must match the grid");
    const cd denom = cd(3.0 - 4.0 * nu, 0.0) - lambda;
    if (std::abs(denom) < 1e-12)
        throw std::domain_error("pressure_from_ur: recovery formula is singular at lambda = 3-4nu");
    const double h = cap.theta0 / N;
    const double mu = static_cast<double>(mode) * (mode + n - 3);
    const SparseD neg_lap =
        sl_conservative(N, n - 2, h, true);  // discrete -Laplace-Beltrami, conservative part
    Eigen::VectorXcd lap = -(neg_lap * ur);
    for (int i = 0; i < N; ++i) {
        const double s = std::sin((i + 0.5) * h);
        lap(i) -= mu / (s * s) * ur(i);
    }
    const cd c0 = (lambda + 1.0) * (lambda + static_cast<double>(n) - 1.0);
    return -(lap + c0 * ur) / denom;
}

}  // namespace conespec::pencil
