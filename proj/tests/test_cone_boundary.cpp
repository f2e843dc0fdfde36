#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conespec/cone_boundary.hpp"

using namespace conespec::harness;
using std::numbers::pi;

namespace {
ConeBoundaryConfig small_cfg() {
    ConeBoundaryConfig c;
    c.bands = 12;
    c.radial_per_band = 3;
    c.angular = 32;
    c.lid_rings = 5;
    return c;
}
}  // namespace

TEST_CASE("mesh measure matches the analytic areas within 1%") {
    const auto b = make_cone_boundary(small_cfg());
    const double analytic = b.lateral_measure_analytic() + b.lid_measure_analytic();
    CHECK(std::abs(b.measure_discrete() - analytic) / analytic < 0.01);
    // lateral midpoint quadrature integrates r dr exactly band by band
    double lat = 0.0;
    for (int i = 0; i < b.lateral_count; ++i) lat += b.weight[i];
    CHECK(lat == doctest::Approx(b.lateral_measure_analytic()).epsilon(1e-12));
}

TEST_CASE("weights positive, vertex excluded") {
    const auto b = make_cone_boundary(small_cfg());
    for (int i = 0; i < b.size(); ++i) {
        CHECK(b.weight[i] > 0.0);
        CHECK(b.r[i] > 0.0);
    }
}

TEST_CASE("dyadic rescaling is exact and enlarged bands overlap at most 5 times") {
    const auto b = make_cone_boundary(small_cfg());
    const auto acc = dyadic_band_accounting(b);
    CHECK(acc.rescale_exact);
    CHECK(acc.max_rescale_error == 0.0);
    CHECK(acc.max_overlap <= 5);
    CHECK(acc.interior_overlap == 5);
    CHECK(acc.pass);
}

TEST_CASE("band template halves exactly between consecutive bands") {
    const auto b = make_cone_boundary(small_cfg());
    const auto& cfg = b.cfg;
    const int per_band = cfg.radial_per_band * cfg.angular;
    for (int j = 0; j + 1 < cfg.bands; ++j)
        for (int q = 0; q < cfg.radial_per_band; ++q) {
            const int i0 = j * per_band + q * cfg.angular;
            const int i1 = (j + 1) * per_band + q * cfg.angular;
            CHECK(b.r[i1] == 0.5 * b.r[i0]);  // bitwise by ldexp construction
        }
}

TEST_CASE("enlarged-band power sums respect the overlap factor") {
    const auto b = make_cone_boundary(small_cfg());
    for (double p : {1.0, 1.5, 2.0}) {
        const auto f = sample_boundary_data(b, seeded_random_datum(4, b.cfg.delta), "random");
        const double total = std::pow(lp_norm(b, f, p), p);
        const double oversum = enlarged_band_power_sum(b, f, p);
        CHECK(oversum <= 5.0 * total + 1e-12);
        CHECK(oversum > total * 0.5);  // the enlarged bands certainly cover the lateral mesh
    }
}

TEST_CASE("data generators are reproducible and positive") {
    const auto b = make_cone_boundary(small_cfg());
    const auto f1 = sample_boundary_data(b, seeded_random_datum(11, 1.0), "random");
    const auto f2 = sample_boundary_data(b, seeded_random_datum(11, 1.0), "random");
    const auto f3 = sample_boundary_data(b, seeded_random_datum(12, 1.0), "random");
    CHECK(f1.values == f2.values);
    CHECK(f1.values != f3.values);
    for (double v : f1.values) CHECK(v > 0.0);

    const auto c = sample_boundary_data(b, constant_datum(2.5), "const");
    for (double v : c.values) CHECK(v == 2.5);

    const auto band = sample_boundary_data(b, band_localized_datum(2, 1.0), "band2");
    for (int i = 0; i < b.size(); ++i) {
        const bool in = b.band[i] == 2;
        CHECK(band.values[i] == (in ? 1.0 : 0.0));
    }

    const auto vs = sample_boundary_data(b, vertex_singular_datum(1.2, 1.0), "vertex");
    for (int i = 0; i < b.size(); ++i)
        CHECK(vs.values[i] == doctest::Approx(std::pow(b.r[i], -1.2)).epsilon(1e-12));
}

TEST_CASE("generators are continuum functions across refinements") {
    auto coarse_cfg = small_cfg();
    auto fine_cfg = small_cfg();
    fine_cfg.angular *= 2;
    const auto coarse = make_cone_boundary(coarse_cfg);
    const auto fine = make_cone_boundary(fine_cfg);
    const auto fn = seeded_random_datum(3, 1.0);
    // a coarse mesh point and any fine point at the same position agree
    const auto fc = sample_boundary_data(coarse, fn, "r");
    const auto ff = sample_boundary_data(fine, fn, "r");
    CHECK(std::abs(l1_norm(coarse, fc) - l1_norm(fine, ff)) / l1_norm(coarse, fc) < 0.01);
}

TEST_CASE("norms") {
    const auto b = make_cone_boundary(small_cfg());
    const auto one = sample_boundary_data(b, constant_datum(1.0), "one");
    CHECK(l1_norm(b, one) == doctest::Approx(b.measure_discrete()));
    CHECK(lp_norm(b, one, 2.0) == doctest::Approx(std::sqrt(b.measure_discrete())));
    CHECK(lp_norm(b, one, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
}

TEST_CASE("degenerate configurations are rejected") {
    ConeBoundaryConfig c = small_cfg();
    c.bands = 0;
    CHECK_THROWS_AS(make_cone_boundary(c), std::invalid_argument);
    c = small_cfg();
    c.theta0 = pi;
    CHECK_THROWS_AS(make_cone_boundary(c), std::invalid_argument);
}
