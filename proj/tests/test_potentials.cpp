#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conespec/config.hpp"
#include "conespec/lemma_verify.hpp"

using namespace conespec;
using namespace conespec::harness;
using std::numbers::pi;

namespace {

constexpr double kAlpha = 0.254820111338721;  // hemisphere Stokes decay exponent
constexpr double kPmin = 1.593853957175004;

ConeBoundaryConfig mesh_cfg(int bands = 12, int nr = 3, int nphi = 48) {
    ConeBoundaryConfig c;
    c.bands = bands;
    c.radial_per_band = nr;
    c.angular = nphi;
    c.lid_rings = 6;
    return c;
}

HarnessConfig quick_harness() {
    HarnessConfig cfg;
    cfg.alpha = kAlpha;
    cfg.levels = 3;
    cfg.base_bands = 8;
    cfg.base_radial = 2;
    cfg.base_angular = 32;
    cfg.base_lid_rings = 4;
    cfg.depth_step = 14;
    return cfg;
}

}  // namespace

TEST_CASE("weak quasinorm examples") {
    SUBCASE("constant on a unit-measure set") {
        std::vector<double> v(10, 3.0), w(10, 0.1);
        CHECK(weak_lp_quasinorm(v, w, 1.0) == doctest::Approx(3.0));
        CHECK(weak_lp_quasinorm(v, w, 2.0) == doctest::Approx(3.0));
    }
    SUBCASE("two-level distribution, p = 1") {
        std::vector<double> v = {2.0, 1.0};
        std::vector<double> w = {0.25, 1.0};
        // candidates: 2 * 1/4 and 1 * (1/4 + 1)
        CHECK(weak_lp_quasinorm(v, w, 1.0) == doctest::Approx(1.25));
    }
    SUBCASE("p = infinity is the plain supremum") {
        std::vector<double> v = {-5.0, 2.0, 4.5};
        std::vector<double> w = {1.0, 1.0, 1.0};
        CHECK(weak_lp_quasinorm(v, w, std::numeric_limits<double>::infinity()) ==
              doctest::Approx(5.0));
    }
    SUBCASE("dominated by the strong norm (Chebyshev)") {
        std::uint64_t state = 5;
        std::vector<double> v(200), w(200);
        for (int i = 0; i < 200; ++i) {
            v[i] = 10.0 * (uniform01(state) - 0.3);
            w[i] = 0.01 + uniform01(state);
        }
        for (double p : {1.0, 1.3, 2.0, 4.0})
            CHECK(weak_lp_quasinorm(v, w, p) <= lp_norm(v, w, p) * (1.0 + 1e-12));
    }
}

TEST_CASE("distance to the truncated-cone boundary") {
    const double t0 = pi / 2, delta = 1.0;
    // on the axis at half depth: lateral distance r sin(theta0)
    CHECK(distance_to_boundary({0.0, 0.0, 0.5}, t0, delta) == doctest::Approx(0.5));
    // near the lid the lid wins
    CHECK(distance_to_boundary({0.0, 0.0, 0.99}, t0, delta) == doctest::Approx(0.01));
    // narrow cone: apex distance caps the lateral formula
    CHECK(distance_to_boundary({0.0, 0.0, 0.3}, 0.2, delta) ==
          doctest::Approx(0.3 * std::sin(0.2)));
}

TEST_CASE("fast zone-aggregated evaluation equals the direct sum") {
    const auto b = make_cone_boundary(mesh_cfg());
    const green::KernelBoundModel model(3, kAlpha);
    const auto f = sample_boundary_data(b, seeded_random_datum(17, 1.0), "random");
    const PotentialEvaluator pot(b, f, model);
    std::uint64_t state = 40;
    for (int i = 0; i < 50; ++i) {
        // random interior points across scales
        const double r = std::pow(2.0, -10.0 * uniform01(state));
        const double colat = 0.9 * pi / 2 * uniform01(state);
        const double phi = 2 * pi * uniform01(state);
        const Eigen::Vector3d y(r * std::sin(colat) * std::cos(phi),
                                r * std::sin(colat) * std::sin(phi), r * std::cos(colat));
        const auto fast = pot.evaluate(y);
        const auto direct = pot.evaluate_direct(y);
        CHECK(fast.v1 == doctest::Approx(direct.v1).epsilon(1e-10));
        CHECK(fast.v2 == doctest::Approx(direct.v2).epsilon(1e-10));
        CHECK(fast.v3 == doctest::Approx(direct.v3).epsilon(1e-10));
    }
}

TEST_CASE("band-localized datum: far-field potential matches the radial sum") {
    const auto b = make_cone_boundary(mesh_cfg());
    const green::KernelBoundModel model(3, kAlpha);
    auto f = sample_boundary_data(b, band_localized_datum(1, 1.0), "band1");
    const double norm1 = l1_norm(b, f);
    for (auto& v : f.values) v /= norm1;
    const PotentialEvaluator pot(b, f, model);
    const Eigen::Vector3d y(0.05, 0.02, 0.08);  // |y| ~ 0.1, band 1 is far field
    const double ry = y.norm();
    REQUIRE(2.0 * ry < 0.25);  // entire band in the far zone
    double expect = 0.0;
    for (int i = 0; i < b.size(); ++i)
        if (f.values[i] != 0.0)
            expect += b.weight[i] * f.values[i] * std::pow(b.r[i], -(2.0 + kAlpha));
    expect *= std::pow(ry, kAlpha);
    const auto v = pot.evaluate(y);
    CHECK(v.v1 == doctest::Approx(expect).epsilon(1e-8));
    CHECK(v.v2 == 0.0);
    CHECK(v.v3 == 0.0);
}

TEST_CASE("zero datum gives zero potentials and stars") {
    const auto b = make_cone_boundary(mesh_cfg());
    const green::KernelBoundModel model(3, kAlpha);
    const auto f = sample_boundary_data(b, constant_datum(0.0), "zero");
    const PotentialEvaluator pot(b, f, model);
    const auto v = pot.evaluate({0.1, 0.0, 0.2});
    CHECK(v.v1 == 0.0);
    CHECK(v.v2 == 0.0);
    CHECK(v.v3 == 0.0);
    const auto m = maximal_surrogate(b.xyz[b.lateral_count / 2], false, pot, ConeSampleConfig{});
    CHECK(m.v1_star == 0.0);
    CHECK(m.v2_star == 0.0);
    CHECK(m.v3_star == 0.0);
}

TEST_CASE("potentials are monotone in the datum") {
    const auto b = make_cone_boundary(mesh_cfg());
    const green::KernelBoundModel model(3, kAlpha);
    const auto f = sample_boundary_data(b, seeded_random_datum(23, 1.0), "f");
    BoundaryData g = f;
    for (auto& v : g.values) v *= 1.7;  // pointwise dominating
    const PotentialEvaluator pf(b, f, model), pg(b, g, model);
    std::uint64_t state = 3;
    for (int i = 0; i < 20; ++i) {
        const double r = std::pow(2.0, -8.0 * uniform01(state));
        const Eigen::Vector3d y(0.2 * r, 0.1 * r, 0.7 * r);
        const auto a = pf.evaluate(y), c = pg.evaluate(y);
        CHECK(a.v1 <= c.v1 + 1e-15);
        CHECK(a.v2 <= c.v2 + 1e-15);
        CHECK(a.v3 <= c.v3 + 1e-15);
    }
}

TEST_CASE("nontangential cone samples satisfy the aperture contract") {
    const double t0 = pi / 2, delta = 1.0;
    const ConeSampleConfig cone;
    std::uint64_t state = 77;
    for (int trial = 0; trial < 40; ++trial) {
        const double r = std::pow(2.0, -8.0 * uniform01(state));
        const double phi = 2 * pi * uniform01(state);
        const Eigen::Vector3d x(r * std::cos(phi), r * std::sin(phi), 0.0);  // lateral, t0 = pi/2
        const auto ys = nontangential_samples(x, false, cone, t0, delta);
        CHECK(!ys.empty());
        for (const auto& y : ys) {
            CHECK((y - x).norm() <= cone.height * (1 + 1e-12));
            CHECK(distance_to_boundary(y, t0, delta) >= cone.aperture * (y - x).norm() - 1e-12);
            CHECK(y.norm() < delta);
        }
    }
}

TEST_CASE("maximal surrogate: w/z split and pointwise combination") {
    const auto b = make_cone_boundary(mesh_cfg());
    const green::KernelBoundModel model(3, kAlpha);
    const auto f = sample_boundary_data(b, seeded_random_datum(29, 1.0), "f");
    const PotentialEvaluator pot(b, f, model);
    const ConeSampleConfig cone;
    int tested = 0;
    for (int i = 0; i < b.lateral_count; i += 97) {
        const auto m = maximal_surrogate(b.xyz[i], false, pot, cone);
        if (m.skipped) continue;
        ++tested;
        CHECK(m.v2_star <= m.w + m.z + 1e-15);
        CHECK(m.v2_star == doctest::Approx(std::max(m.w, m.z)));
        CHECK(m.u_star <= m.v1_star + m.v2_star + m.v3_star + 1e-12);
        CHECK(m.v1_star >= 0.0);
    }
    CHECK(tested > 10);
}

TEST_CASE("v1* and z obey the vertex decay bounds") {
    const auto b = make_cone_boundary(mesh_cfg(14, 3, 48));
    const green::KernelBoundModel model(3, kAlpha);
    const auto f = sample_boundary_data(b, seeded_random_datum(31, 1.0), "f");
    const double f1 = l1_norm(b, f);
    const PotentialEvaluator pot(b, f, model);
    const ConeSampleConfig cone;
    double c_v1 = 0.0, c_z = 0.0;
    for (int i = 0; i < b.lateral_count; i += 31) {
        const auto m = maximal_surrogate(b.xyz[i], false, pot, cone);
        if (m.skipped) continue;
        const double rx = b.r[i];
        c_v1 = std::max(c_v1, m.v1_star * rx * rx / f1);
        c_z = std::max(c_z, m.z * rx * rx / f1);
    }
    CHECK(c_v1 > 0.0);
    CHECK(c_v1 < 50.0);  // fitted constant stays modest
    CHECK(c_z < 50.0);
}

TEST_CASE("lemma 1 and lemma 3 verdicts pass on a small suite") {
    const HarnessConfig cfg = quick_harness();
    const std::vector<DataSpec> suite = {{"random", 7, 0, 0}, {"constant", 0, 1.0, 0}};
    const auto v1 = verify_lemma(1, suite, 1.0, cfg);
    CHECK(v1.pass);
    CHECK(v1.branch == "bounded");
    CHECK(v1.drift <= 0.20);
    const auto v3 = verify_lemma(3, suite, 2.0, cfg);
    CHECK(v3.pass);
    const auto v4 = verify_lemma(4, suite, 2.0, cfg);
    CHECK(v4.pass);
    CHECK(v4.notes.back().find("assumes") != std::string::npos);
}

TEST_CASE("lemma 2: divergence below the critical exponent, stability above") {
    HarnessConfig cfg = quick_harness();
    cfg.levels = 2;
    const std::vector<DataSpec> critical = {{"vertex-power", 0, 0.0, 0}};
    const auto sharp = verify_lemma(2, critical, 0.9 * kPmin, cfg);
    CHECK(sharp.branch == "diverges");
    CHECK(sharp.pass);
    CHECK(sharp.max_ratios[1] >= 2.0 * sharp.max_ratios[0]);

    const std::vector<DataSpec> mild = {{"vertex-power", 0, 0.3, 0}};
    const auto stable = verify_lemma(2, mild, 1.05 * kPmin, cfg);
    CHECK(stable.branch == "bounded");
    CHECK(stable.pass);
    CHECK(stable.drift <= 0.20);
}

TEST_CASE("quadrature stability of the reported norms") {
    // between the two finest levels every reported norm moves by <= 5%
    const HarnessConfig cfg = quick_harness();
    const DataSpec spec{"random", 41, 0, 0};
    const auto a = evaluate_level(spec, 2.0, 1, cfg);
    const auto b = evaluate_level(spec, 2.0, 2, cfg);
    const double w1a = weak_lp_quasinorm(a.v1_star, a.weight, 1.0);
    const double w1b = weak_lp_quasinorm(b.v1_star, b.weight, 1.0);
    CHECK(std::abs(w1b - w1a) / w1a < 0.05);
    const double s2a = lp_norm(a.v2_star, a.weight, 2.0);
    const double s2b = lp_norm(b.v2_star, b.weight, 2.0);
    CHECK(std::abs(s2b - s2a) / s2a < 0.05);
    CHECK(std::abs(b.f_l1 - a.f_l1) / a.f_l1 < 0.05);
}

TEST_CASE("constant datum keeps v1 uniformly bounded") {
    // the far-field integral of |xi|^{-(n-1+alpha)} is bounded by |y|^{-alpha},
    // so v1 stays below a fixed multiple of sup|f| at every depth
    const auto b = make_cone_boundary(mesh_cfg(16, 3, 48));
    const green::KernelBoundModel model(3, kAlpha);
    const auto f = sample_boundary_data(b, constant_datum(1.0), "one");
    const PotentialEvaluator pot(b, f, model);
    std::uint64_t state = 8;
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double r = std::pow(2.0, -14.0 * uniform01(state));
        const double colat = 0.95 * pi / 2 * uniform01(state);
        const Eigen::Vector3d y(r * std::sin(colat), 0.0, r * std::cos(colat));
        sup = std::max(sup, pot.evaluate(y).v1);
    }
    CHECK(sup > 0.0);
    CHECK(sup < 50.0);
}

TEST_CASE("z endpoint constant is stable across refinements") {
    const HarnessConfig cfg = quick_harness();
    const DataSpec spec{"random", 51, 0, 0};
    std::vector<double> fits;
    for (int level : {1, 2}) {
        const auto ev = evaluate_level(spec, 2.0, level, cfg);
        double c_z = 0.0;
        for (std::size_t i = 0; i < ev.z.size(); ++i)
            c_z = std::max(c_z, ev.z[i] * ev.radius[i] * ev.radius[i] / ev.f_l1);
        fits.push_back(c_z);
    }
    CHECK(fits[0] > 0.0);
    CHECK(std::abs(fits[1] - fits[0]) / fits[0] < 0.20);
}

TEST_CASE("quadrature convergence check accepts sane meshes, flags impossible tolerances") {
    const green::KernelBoundModel model(3, kAlpha);
    const auto datum = seeded_random_datum(9, 1.0);
    std::vector<Eigen::Vector3d> probes = {{0.05, 0.02, 0.08}, {0.2, -0.1, 0.3}, {0.0, 0.0, 0.6}};
    CHECK_NOTHROW(potential_convergence_check(mesh_cfg(12, 3, 64), datum, model, probes, 0.05));
    CHECK_THROWS_AS(potential_convergence_check(mesh_cfg(8, 2, 16), datum, model, probes, 1e-12),
                    std::runtime_error);
}

TEST_CASE("verify_lemma rejects bad inputs") {
    const HarnessConfig cfg = quick_harness();
    CHECK_THROWS_AS(verify_lemma(5, {{"constant", 0, 1.0, 0}}, 2.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma(1, {}, 2.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma(1, {{"nonsense", 0, 0, 0}}, 2.0, cfg), std::invalid_argument);
}
