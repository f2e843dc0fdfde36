#include <algorithm>
#include <cmath>
#include <sstream>

#include "conespec/pencil.hpp"

namespace conespec::pencil {

double phi_eval(double t, const PhiContext& ctx) {
    const double n = ctx.n;
    return (t + 1.0) * (t + n - 1.0) * (2.0 * t + n - 2.0) -
           (3.0 - 4.0 * ctx.nu - t) * (ctx.M - t) * (ctx.M + t + n - 2.0);
}

double phi_rhs(double t, int n) { return (n - 1.0) * (2.0 * t + n - 2.0); }

double t_of_M(const PhiContext& ctx) {
    const double lo = -0.5 * (ctx.n - 2.0);
    const double hi = ctx.M;
    auto psi = [&](double t) { return phi_eval(t, ctx) - phi_rhs(t, ctx.n); };

    const int scan = 10000;
    const double step = (hi - lo) / scan;
    double a = lo, fa = psi(lo);
    double bracket_a = 0.0, bracket_b = 0.0;
    bool found = false;
    for (int i = 1; i <= scan; ++i) {
        const double b = lo + i * step;
        const double fb = psi(b);
        if (fa < 0.0 && fb >= 0.0) {
            // first sign change: must not occur at nonpositive t
            if (b <= 0.0) {
                std::ostringstream os;
                os << "t_of_M: sign change at nonpositive t in [" << a << ", " << b
                   << "], psi = " << fa << " -> " << fb << "; assembly inputs n=" << ctx.n
                   << " nu=" << ctx.nu << " M=" << ctx.M;
                throw std::runtime_error(os.str());
            }
            bracket_a = a;
            bracket_b = b;
            found = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!found) {
        std::ostringstream os;
        os << "t_of_M: no root bracket in (" << lo << ", " << hi << "); psi(lo)=" << psi(lo)
           << " psi(hi)=" << psi(hi) << " (n=" << ctx.n << " nu=" << ctx.nu << " M=" << ctx.M
           << ")";
        throw std::runtime_error(os.str());
    }
    double fa2 = psi(bracket_a);
    for (int it = 0; it < 200 && bracket_b - bracket_a > 1e-12 * std::max(1.0, ctx.M); ++it) {
        const double mid = 0.5 * (bracket_a + bracket_b);
        const double fm = psi(mid);
        if ((fa2 < 0.0) == (fm < 0.0)) {
            bracket_a = mid;
            fa2 = fm;
        } else {
            bracket_b = mid;
        }
    }
    const double root = 0.5 * (bracket_a + bracket_b);
    if (!(root > 0.0))
        throw std::runtime_error("t_of_M: computed root is not positive (internal error)");
    return root;
}

StripReport StripReport::from_t(int n, double t) {
    StripReport r;
    r.t_of_M = t;
    r.alpha = std::min(1.0, t);
    r.halfwidth = r.alpha + 0.5 * (n - 2.0);
    r.p_min = (n - 1.0) / (r.alpha + n - 2.0);
    return r;
}

StripReport strip_report(const PhiContext& ctx) { return StripReport::from_t(ctx.n, t_of_M(ctx)); }

}  // namespace conespec::pencil
