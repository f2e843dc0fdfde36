#include "conespec/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace conespec::harness {

using std::numbers::pi;

// Near-singular regularization of the middle-zone kernel: distances below the
// local quadrature footprint cannot be resolved by the mesh; clipping them
// keeps the discrete sup consistent with the integral it approximates and
// converges to it as the footprint shrinks.
constexpr double kFootprintFactor = 0.75;

// Fraction of the radial cell [r - dr/2, r + dr/2] lying above `hi`, below
// `lo`, and in between. The vertex-side integrand concentrates mass at the
// zone cut, so splitting the straddling cells is what makes the quadrature
// second order there instead of O(1/points-per-band).
struct ZoneSplit {
    double far, mid, near;
};
ZoneSplit zone_fractions(double r, double dr, double lo, double hi) {
    if (dr <= 0.0) {
        if (r > hi) return {1.0, 0.0, 0.0};
        if (r < lo) return {0.0, 0.0, 1.0};
        return {0.0, 1.0, 0.0};
    }
    const double a = r - 0.5 * dr, b = r + 0.5 * dr;
    const double far = std::clamp((b - hi) / dr, 0.0, 1.0);
    const double near = std::clamp((lo - a) / dr, 0.0, 1.0);
    return {far, std::max(0.0, 1.0 - far - near), near};
}

double distance_to_boundary(const Eigen::Vector3d& y, double theta0, double delta) {
    const double ry = y.norm();
    if (ry == 0.0) return 0.0;
    const double colat = std::acos(std::clamp(y.z() / ry, -1.0, 1.0));
    const double gap = theta0 - colat;
    const double to_lateral = (gap <= 0.5 * pi) ? ry * std::sin(gap) : ry;
    return std::min(to_lateral, delta - ry);
}

PotentialEvaluator::PotentialEvaluator(const ConeBoundary& bnd, const BoundaryData& f,
                                       const green::KernelBoundModel& model)
    : bnd_(&bnd), f_(&f), alpha_(model.alpha) {
    if (model.n != 3)
        throw std::invalid_argument("PotentialEvaluator: the concrete harness is 3-dimensional");
    if (static_cast<int>(f.values.size()) != bnd.size())
        throw std::invalid_argument("PotentialEvaluator: datum does not match the mesh");
    const int nb = bnd.cfg.bands;
    band_s1_.assign(nb, 0.0);
    band_s3_.assign(nb, 0.0);
    band_begin_.assign(nb, bnd.lateral_count);
    band_end_.assign(nb, 0);
    const double a = alpha_;
    for (int i = 0; i < bnd.size(); ++i) {
        const double wf = bnd.weight[i] * std::abs(f.values[i]);
        const double rr = bnd.r[i];
        const double s1 = wf * std::pow(rr, -(2.0 + a));  // n-1+alpha with n=3
        const double s3 = wf * std::pow(rr, a - 1.0);
        if (bnd.band[i] >= 0) {
            band_s1_[bnd.band[i]] += s1;
            band_s3_[bnd.band[i]] += s3;
            band_begin_[bnd.band[i]] = std::min(band_begin_[bnd.band[i]], i);
            band_end_[bnd.band[i]] = std::max(band_end_[bnd.band[i]], i + 1);
        } else {
            lid_s1_ += s1;
            lid_s3_ += s3;
        }
    }
}

PotentialTriple PotentialEvaluator::evaluate(const Eigen::Vector3d& y) const {
    const auto& b = *bnd_;
    const double ry = y.norm();
    if (!(ry > 0.0)) throw std::domain_error("PotentialEvaluator: y must be away from the vertex");
    const double a = alpha_;
    const double hi_cut = 2.0 * ry;   // E1 beyond, strictly
    const double lo_cut = 0.5 * ry;   // E3 below, strictly

    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    // lid sits at a single radius
    if (b.cfg.delta > hi_cut) {
        s1 += lid_s1_;
    } else if (b.cfg.delta < lo_cut) {
        s3 += lid_s3_;
    } else {
        for (int i = b.lateral_count; i < b.size(); ++i)
            s2 += b.weight[i] * std::abs(f_->values[i]) /
                  std::pow(std::max((y - b.xyz[i]).norm(), kFootprintFactor * b.footprint[i]), 3);
    }
    for (int j = 0; j < b.cfg.bands; ++j) {
        const double band_hi = b.cfg.delta * std::ldexp(1.0, -j);
        const double band_lo = 0.5 * band_hi;
        if (band_lo > hi_cut) {
            s1 += band_s1_[j];
        } else if (band_hi < lo_cut) {
            s3 += band_s3_[j];
        } else {
            for (int i = band_begin_[j]; i < band_end_[j]; ++i) {
                const double rr = b.r[i];
                const double wf = b.weight[i] * std::abs(f_->values[i]);
                const ZoneSplit zs = zone_fractions(rr, b.dr[i], lo_cut, hi_cut);
                if (zs.far > 0.0) s1 += zs.far * wf * std::pow(rr, -(2.0 + a));
                if (zs.near > 0.0) s3 += zs.near * wf * std::pow(rr, a - 1.0);
                if (zs.mid > 0.0)
                    s2 += zs.mid * wf /
                          std::pow(std::max((y - b.xyz[i]).norm(),
                                            kFootprintFactor * b.footprint[i]),
                                   3);
            }
        }
    }
    const double r_y = std::max(distance_to_boundary(y, b.cfg.theta0, b.cfg.delta), 0.0);
    return {std::pow(ry, a) * s1, r_y * s2, std::pow(ry, -(1.0 + a)) * s3};
}

PotentialTriple PotentialEvaluator::evaluate_direct(const Eigen::Vector3d& y) const {
    const auto& b = *bnd_;
    const double ry = y.norm();
    const double a = alpha_;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int i = 0; i < b.size(); ++i) {
        const double rr = b.r[i];
        const double wf = b.weight[i] * std::abs(f_->values[i]);
        const ZoneSplit zs = zone_fractions(rr, b.dr[i], 0.5 * ry, 2.0 * ry);
        if (zs.far > 0.0) s1 += zs.far * wf * std::pow(rr, -(2.0 + a));
        if (zs.near > 0.0) s3 += zs.near * wf * std::pow(rr, a - 1.0);
        if (zs.mid > 0.0)
            s2 += zs.mid * wf /
                  std::pow(std::max((y - b.xyz[i]).norm(), kFootprintFactor * b.footprint[i]), 3);
    }
    const double r_y = std::max(distance_to_boundary(y, b.cfg.theta0, b.cfg.delta), 0.0);
    return {std::pow(ry, a) * s1, r_y * s2, std::pow(ry, -(1.0 + a)) * s3};
}

std::vector<Eigen::Vector3d> nontangential_samples(const Eigen::Vector3d& x, bool lid_point,
                                                   const ConeSampleConfig& cone, double theta0,
                                                   double delta) {
    const double rx = x.norm();
    Eigen::Vector3d inward, t1, t2;
    if (lid_point) {
        inward = -x / rx;
        t1 = inward.unitOrthogonal();
        t2 = inward.cross(t1);
    } else {
        const double phi = std::atan2(x.y(), x.x());
        const double st = std::sin(theta0), ct = std::cos(theta0);
        inward = {-ct * std::cos(phi), -ct * std::sin(phi), st};
        t1 = {-std::sin(phi), std::cos(phi), 0.0};           // azimuthal
        t2 = {st * std::cos(phi), st * std::sin(phi), ct};   // radial, along the generator
    }
    const double golden = 2.399963229728653;
    const double tilt = 0.35;
    std::vector<Eigen::Vector3d> out;
    out.reserve(cone.samples);
    for (int s = 0; s < cone.samples; ++s) {
        // log-spaced depths over two decades, gently swirled off the normal
        const double depth = cone.height * std::exp(-std::log(100.0) * (s + 0.5) / cone.samples);
        const Eigen::Vector3d dir =
            (inward + tilt * (std::cos(golden * s) * t1 + std::sin(golden * s) * t2)).normalized();
        const Eigen::Vector3d y = x + depth * dir;
        const double ry = y.norm();
        if (!(ry > 0.0) || ry >= delta) continue;
        const double colat = std::acos(std::clamp(y.z() / ry, -1.0, 1.0));
        if (colat >= theta0) continue;
        const double dist = distance_to_boundary(y, theta0, delta);
        if (dist < cone.aperture * (y - x).norm()) continue;
        out.push_back(y);
    }
    return out;
}

MaximalValues maximal_surrogate(const Eigen::Vector3d& x, bool lid_point,
                                const PotentialEvaluator& pot, const ConeSampleConfig& cone) {
    const auto& b = pot.boundary();
    const auto ys = nontangential_samples(x, lid_point, cone, b.cfg.theta0, b.cfg.delta);
    MaximalValues m;
    if (ys.empty()) {
        m.skipped = true;
        return m;
    }
    const double rx = x.norm();
    for (const auto& y : ys) {
        const PotentialTriple v = pot.evaluate(y);
        m.v1_star = std::max(m.v1_star, v.v1);
        m.v2_star = std::max(m.v2_star, v.v2);
        m.v3_star = std::max(m.v3_star, v.v3);
        m.u_star = std::max(m.u_star, v.total());
        if ((y - x).norm() <= rx)
            m.w = std::max(m.w, v.v2);
        else
            m.z = std::max(m.z, v.v2);
    }
    return m;
}

void potential_convergence_check(const ConeBoundaryConfig& mesh, const DatumFn& datum,
                                 const green::KernelBoundModel& model,
                                 std::span<const Eigen::Vector3d> probes, double tol) {
    ConeBoundaryConfig fine = mesh;
    fine.angular *= 2;
    fine.radial_per_band *= 2;
    const ConeBoundary coarse_b = make_cone_boundary(mesh);
    const ConeBoundary fine_b = make_cone_boundary(fine);
    const BoundaryData fc = sample_boundary_data(coarse_b, datum, "probe");
    const BoundaryData ff = sample_boundary_data(fine_b, datum, "probe");
    const PotentialEvaluator pc(coarse_b, fc, model), pf(fine_b, ff, model);
    for (const auto& y : probes) {
        const PotentialTriple a = pc.evaluate(y), b = pf.evaluate(y);
        const double pairs[3][2] = {{a.v1, b.v1}, {a.v2, b.v2}, {a.v3, b.v3}};
        for (const auto& pr : pairs) {
            const double scale = std::max({std::abs(pr[1]), std::abs(pr[0]), 1e-300});
            if (std::abs(pr[1] - pr[0]) > tol * scale)
                throw std::runtime_error(
                    "potential quadrature did not converge at the finest refinement: "
                    "relative change " +
                    std::to_string(std::abs(pr[1] - pr[0]) / scale) + " exceeds tolerance " +
                    std::to_string(tol));
        }
    }
}

double weak_lp_quasinorm(std::span<const double> values, std::span<const double> weights,
                         double p) {
    if (values.size() != weights.size())
        throw std::invalid_argument("weak_lp_quasinorm: size mismatch");
    if (p < 1.0) throw std::invalid_argument("weak_lp_quasinorm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    std::vector<std::pair<double, double>> av(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) av[i] = {std::abs(values[i]), weights[i]};
    std::sort(av.begin(), av.end(), [](auto& a, auto& b) { return a.first > b.first; });
    double tail = 0.0, best = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
        tail += av[i].second;  // measure of {|v| >= current value}
        if (i + 1 < av.size() && av[i + 1].first == av[i].first) continue;
        best = std::max(best, av[i].first * std::pow(tail, 1.0 / p));
    }
    return best;
}

double lp_norm(std::span<const double> values, std::span<const double> weights, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += weights[i] * std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace conespec::harness
