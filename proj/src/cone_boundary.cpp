#include "conespec/cone_boundary.hpp"

#include <cmath>
#include <numbers>

#include "conespec/config.hpp"

namespace conespec::harness {

using std::numbers::pi;

double ConeBoundary::lateral_measure_analytic() const {
    // full lateral area minus the part below the innermost meshed radius
    const double rmin2 = std::ldexp(1.0, -2 * cfg.bands);
    return pi * cfg.delta * cfg.delta * std::sin(cfg.theta0) * (1.0 - rmin2);
}

double ConeBoundary::lid_measure_analytic() const {
    return 2.0 * pi * cfg.delta * cfg.delta * (1.0 - std::cos(cfg.theta0));
}

double ConeBoundary::measure_discrete() const {
    double s = 0.0;
    for (double w : weight) s += w;
    return s;
}

std::vector<double> ConeBoundary::radial_template() const {
    std::vector<double> t(cfg.radial_per_band);
    for (int q = 0; q < cfg.radial_per_band; ++q)
        t[q] = 0.5 + (q + 0.5) / (2.0 * cfg.radial_per_band);
    return t;
}

ConeBoundary make_cone_boundary(const ConeBoundaryConfig& cfg) {
    if (cfg.bands < 1 || cfg.radial_per_band < 1 || cfg.angular < 4 || cfg.lid_rings < 1)
        throw std::invalid_argument("make_cone_boundary: degenerate mesh configuration");
    if (!(cfg.theta0 > 0.0) || !(cfg.theta0 < pi))
        throw std::invalid_argument("make_cone_boundary: cap angle must lie in (0, pi)");
    ConeBoundary b;
    b.cfg = cfg;
    const double st = std::sin(cfg.theta0), ct = std::cos(cfg.theta0);
    const double dphi = 2.0 * pi / cfg.angular;
    const auto tmpl = b.radial_template();
    const double dr_frac = 0.5 / cfg.radial_per_band;  // template spacing within a band

    for (int j = 0; j < cfg.bands; ++j) {
        const double scale = cfg.delta * std::ldexp(1.0, -j);  // band j covers (scale/2, scale]
        for (int q = 0; q < cfg.radial_per_band; ++q) {
            const double r = scale * tmpl[q];
            const double dr = scale * dr_frac;
            for (int a = 0; a < cfg.angular; ++a) {
                const double phi = (a + 0.5) * dphi;
                b.xyz.emplace_back(r * st * std::cos(phi), r * st * std::sin(phi), r * ct);
                b.r.push_back(r);
                b.phi.push_back(phi);
                b.colat.push_back(cfg.theta0);
                b.weight.push_back(r * st * dr * dphi);
                b.footprint.push_back(std::max(dr, r * st * dphi));
                b.dr.push_back(dr);
                b.band.push_back(j);
            }
        }
    }
    b.lateral_count = b.size();

    const double dbeta = cfg.theta0 / cfg.lid_rings;
    for (int t = 0; t < cfg.lid_rings; ++t) {
        const double beta = (t + 0.5) * dbeta;
        for (int a = 0; a < cfg.angular; ++a) {
            const double phi = (a + 0.5) * dphi;
            b.xyz.emplace_back(cfg.delta * std::sin(beta) * std::cos(phi),
                               cfg.delta * std::sin(beta) * std::sin(phi),
                               cfg.delta * std::cos(beta));
            b.r.push_back(cfg.delta);
            b.phi.push_back(phi);
            b.colat.push_back(beta);
            b.weight.push_back(cfg.delta * cfg.delta * std::sin(beta) * dbeta * dphi);
            b.footprint.push_back(cfg.delta * std::max(dbeta, std::sin(beta) * dphi));
            b.dr.push_back(0.0);
            b.band.push_back(-1);
        }
    }
    return b;
}

BoundaryData sample_boundary_data(const ConeBoundary& bnd, const DatumFn& fn,
                                  const std::string& description) {
    BoundaryData d;
    d.description = description;
    d.values.resize(bnd.size());
    for (int i = 0; i < bnd.size(); ++i)
        d.values[i] = fn(bnd.r[i], bnd.phi[i], bnd.band[i] < 0, bnd.colat[i]);
    return d;
}

DatumFn constant_datum(double value) {
    return [value](double, double, bool, double) { return value; };
}

DatumFn seeded_random_datum(std::uint64_t seed, double delta) {
    // smooth positive field: exponential of a short random Fourier sum in
    // azimuth and log-radius, identical at every refinement level
    struct Coef {
        double a, b, c, d;
    };
    std::vector<Coef> coefs(4);
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 0x1234567ULL;
    for (auto& co : coefs) {
        co.a = 2.0 * uniform01(state) - 1.0;
        co.b = 2.0 * pi * uniform01(state);
        co.c = 1.0 + 3.0 * uniform01(state);
        co.d = 2.0 * pi * uniform01(state);
    }
    return [coefs, delta](double r, double phi, bool, double) {
        double s = 0.0;
        for (std::size_t k = 0; k < coefs.size(); ++k) {
            const auto& co = coefs[k];
            s += co.a / (k + 1.0) * std::cos((k + 1.0) * phi + co.b) *
                 std::cos(co.c * std::log2(r / delta) + co.d);
        }
        return std::exp(0.6 * s);
    };
}

DatumFn band_localized_datum(int band_index, double delta) {
    const double hi = delta * std::ldexp(1.0, -band_index);
    const double lo = 0.5 * hi;
    return [lo, hi](double r, double, bool lid, double) {
        return (!lid && r > lo && r <= hi) ? 1.0 : 0.0;
    };
}

DatumFn vertex_singular_datum(double beta, double delta) {
    return [beta, delta](double r, double, bool, double) { return std::pow(r / delta, -beta); };
}

double l1_norm(const ConeBoundary& bnd, const BoundaryData& f) {
    double s = 0.0;
    for (int i = 0; i < bnd.size(); ++i) s += bnd.weight[i] * std::abs(f.values[i]);
    return s;
}

double lp_norm(const ConeBoundary& bnd, const BoundaryData& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (int i = 0; i < bnd.size(); ++i) s += bnd.weight[i] * std::pow(std::abs(f.values[i]), p);
    return std::pow(s, 1.0 / p);
}

namespace {

/// Membership count of radius rr in the enlarged bands [2^{-j-2}, 2^{-j+3}] delta.
int overlap_count(double rr, double delta, int bands) {
    int count = 0;
    for (int j = 0; j < bands; ++j) {
        const double lo = delta * std::ldexp(1.0, -j - 2);
        const double hi = delta * std::ldexp(1.0, -j + 3);
        if (rr >= lo && rr <= hi) ++count;
    }
    return count;
}

}  // namespace

BandAccounting dyadic_band_accounting(const ConeBoundary& bnd) {
    BandAccounting acc{};
    const auto& cfg = bnd.cfg;

    // (a) exact rescaling: radii of band j+1 equal half the radii of band j
    acc.rescale_exact = true;
    acc.max_rescale_error = 0.0;
    const auto tmpl = bnd.radial_template();
    for (int i = 0; i < bnd.lateral_count; ++i) {
        const int j = bnd.band[i];
        const int q = (i / cfg.angular) % cfg.radial_per_band;
        const double expect = cfg.delta * std::ldexp(tmpl[q], -j);
        const double err = std::abs(bnd.r[i] - expect);
        acc.max_rescale_error = std::max(acc.max_rescale_error, err);
        if (err > 1e-15 * cfg.delta) acc.rescale_exact = false;
    }

    // (b) enlarged-band overlap counts
    acc.max_overlap = 0;
    acc.interior_overlap = 0;
    for (int i = 0; i < bnd.size(); ++i) {
        const int c = overlap_count(bnd.r[i], cfg.delta, cfg.bands);
        acc.max_overlap = std::max(acc.max_overlap, c);
        const int j = bnd.band[i];
        if (j >= 4 && j + 2 < cfg.bands) acc.interior_overlap = std::max(acc.interior_overlap, c);
    }
    acc.pass = acc.rescale_exact && acc.max_overlap <= 5;
    return acc;
}

double enlarged_band_power_sum(const ConeBoundary& bnd, const BoundaryData& f, double p) {
    double total = 0.0;
    for (int j = 0; j < bnd.cfg.bands; ++j) {
        const double lo = bnd.cfg.delta * std::ldexp(1.0, -j - 2);
        const double hi = bnd.cfg.delta * std::ldexp(1.0, -j + 3);
        for (int i = 0; i < bnd.size(); ++i)
            if (bnd.r[i] >= lo && bnd.r[i] <= hi)
                total += bnd.weight[i] * std::pow(std::abs(f.values[i]), p);
    }
    return total;
}

}  // namespace conespec::harness
