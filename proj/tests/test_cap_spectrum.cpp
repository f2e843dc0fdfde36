#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "conespec/cap_spectrum.hpp"

using namespace conespec;
using namespace conespec::spectra;
using std::numbers::pi;

namespace {
DiscretizationConfig fast_cfg(int n = 128, int levels = 3) {
    DiscretizationConfig cfg;
    cfg.grid_points = n;
    cfg.richardson_levels = levels;
    return cfg;
}
constexpr double kBesselJ01 = 2.404825557695773;
}  // namespace

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(CapDomain(2, 1.0), std::domain_error);
    CHECK_THROWS_AS(CapDomain(3, 0.0), std::domain_error);
    CHECK_THROWS_AS(CapDomain(3, pi), std::domain_error);
    CHECK_THROWS_AS(CapDomain(3, -0.3), std::domain_error);
    CHECK_NOTHROW(CapDomain(3, 3.14));
}

TEST_CASE("exponent_M closed forms and error path") {
    CHECK(exponent_M(2.0, 3) == doctest::Approx(1.0));
    CHECK(exponent_M(3.0, 4) == doctest::Approx(1.0));
    CHECK(exponent_M(0.0, 4) == doctest::Approx(0.0));
    CHECK(exponent_M(6.0, 3) == doctest::Approx(2.0));
    CHECK_THROWS_AS(exponent_M(-1.0, 3), std::domain_error);
}

TEST_CASE("hemisphere ground state is the linear coordinate eigenfunction") {
    // x_n restricted to the upper hemisphere: eigenvalue n-1, exponent M = 1
    for (int n : {3, 4, 5}) {
        const CapDomain cap(n, pi / 2);
        const auto r = dirichlet_eigenvalue_cap(cap, 0, fast_cfg());
        CHECK(r.eigenvalue == doctest::Approx(n - 1.0).epsilon(1e-8));
        CHECK(r.M_exponent == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.residual < 1e-10);
    }
}

TEST_CASE("small caps approach the flat-disk Bessel eigenvalue") {
    const double theta0 = 0.1;
    const CapDomain cap(3, theta0);
    const auto r = dirichlet_eigenvalue_cap(cap, 0, fast_cfg());
    const double disk = std::pow(kBesselJ01 / theta0, 2);
    CHECK(std::abs(r.eigenvalue - disk) / disk < 0.02);
    // oracle: plain dense eigensolve at 10x resolution, no extrapolation
    const auto op = assemble_mode_operator(3, theta0, 0, 1280, false);
    const double fine = lin::eigenvalue_k(op.symmetrized(), 0);
    CHECK(std::abs(r.eigenvalue - fine) / fine < 1e-5);
}

TEST_CASE("Dirichlet domain monotonicity in the opening angle") {
    const auto big = dirichlet_eigenvalue_cap(CapDomain(3, pi / 2), 0, fast_cfg());
    const auto small = dirichlet_eigenvalue_cap(CapDomain(3, pi / 4), 0, fast_cfg());
    CHECK(small.eigenvalue > big.eigenvalue);
}

TEST_CASE("exponent roundtrip M(M+n-2) = eigenvalue") {
    for (int n : {3, 4, 6}) {
        for (double theta0 : {0.6, pi / 2, 2.4}) {
            const CapDomain cap(n, theta0);
            for (int mode : {0, 1, 3}) {
                const auto r = dirichlet_eigenvalue_cap(cap, mode, fast_cfg(64, 2));
                const double back = r.M_exponent * (r.M_exponent + n - 2.0);
                CHECK(std::abs(back - r.eigenvalue) <= 1e-12 * std::max(1.0, r.eigenvalue));
            }
        }
    }
}

TEST_CASE("mode-0 is the global ground state") {
    const CapDomain cap(4, 1.2);
    const auto base = dirichlet_eigenvalue_cap(cap, 0, fast_cfg(64, 2));
    for (int m : {1, 2, 3})
        CHECK(dirichlet_eigenvalue_cap(cap, m, fast_cfg(64, 2)).eigenvalue > base.eigenvalue);
}

TEST_CASE("finite-difference eigenvalues converge at second order") {
    std::vector<double> vals;
    for (int n : {64, 128, 256}) {
        const auto op = assemble_mode_operator(3, pi / 2, 0, n, false);
        vals.push_back(lin::eigenvalue_k(op.symmetrized(), 0));
    }
    CHECK(observed_order(vals) >= 1.5);  // scheme order 2 minus slack
}

TEST_CASE("spectral collocation agrees with finite differences") {
    const auto sp = spectral_cap_eigenvalue(3, pi / 2, 0, 96, false);
    CHECK(sp.eigenvalue == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sp.residual < 1e-10);

    DiscretizationConfig cfg = fast_cfg(256, 4);
    const auto fd = dirichlet_eigenvalue_cap(CapDomain(4, 1.1), 2, cfg);
    const auto sp2 = spectral_cap_eigenvalue(4, 1.1, 2, 96, false);
    CHECK(sp2.eigenvalue == doctest::Approx(fd.eigenvalue).epsilon(1e-7));

    DiscretizationConfig spcfg = fast_cfg(96);
    spcfg.scheme = Scheme::SpectralCollocation;
    const auto viaapi = dirichlet_eigenvalue_cap(CapDomain(4, 1.1), 2, spcfg);
    CHECK(viaapi.eigenvalue == doctest::Approx(sp2.eigenvalue).epsilon(1e-13));
}

TEST_CASE("non-convergence raises a diagnostic carrying the residual") {
    DiscretizationConfig cfg = fast_cfg(64, 1);
    cfg.residual_tol = 1e-30;  // unreachable
    CHECK_THROWS_AS(dirichlet_eigenvalue_cap(CapDomain(3, pi / 2), 0, cfg), EigensolveError);
}

TEST_CASE("mode beyond the configured range is rejected") {
    DiscretizationConfig cfg = fast_cfg(64, 1);
    cfg.max_azimuthal_mode = 2;
    CHECK_THROWS_AS(dirichlet_eigenvalue_cap(CapDomain(3, pi / 2), 3, cfg),
                    std::invalid_argument);
}

TEST_CASE("cap areas") {
    CHECK(cap_area(CapDomain(3, pi / 2)) == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(cap_area(CapDomain(3, pi - 1e-12)) == doctest::Approx(4.0 * pi).epsilon(1e-9));
    CHECK(cap_area(CapDomain(4, pi / 2)) == doctest::Approx(pi * pi).epsilon(1e-12));
}

TEST_CASE("Theta of the closed sphere equals n-1") {
    for (int n : {3, 4, 5}) {
        const auto th = theta_sphere(n, fast_cfg());
        CHECK(th.theta_omega == doctest::Approx(n - 1.0).epsilon(1e-6));
    }
}

TEST_CASE("Theta of the hemisphere: first mean-zero mode") {
    // frozen oracle: the azimuthal degree-2... degree-1 mode-1 eigenfunction of
    // degree 2 attains the minimum with eigenvalue 6; the constrained
    // axisymmetric branch sits near 10.69 and loses
    const auto th = theta_omega(CapDomain(3, pi / 2), fast_cfg());
    CHECK(th.theta_omega == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(th.attaining_mode == 1);
    CHECK(th.constraint_kind == ConstraintKind::UnconstrainedMode);
    CHECK_FALSE(th.mode_range_warning);
    CHECK(th.theta_omega >= 2.0);

    // 10x-resolution single-level oracle agrees
    DiscretizationConfig fine = fast_cfg(1280, 1);
    const auto oracle = theta_omega(CapDomain(3, pi / 2), fine);
    CHECK(std::abs(oracle.theta_omega - th.theta_omega) < 2e-4);
}

TEST_CASE("Theta lower bound and monotonicity under cap inclusion") {
    for (int n : {3, 4}) {
        double prev = -1.0;
        for (double theta0 : {3 * pi / 4, pi / 2, pi / 4}) {  // shrinking caps
            const auto th = theta_omega(CapDomain(n, theta0), fast_cfg(64, 2));
            CHECK(th.theta_omega >= n - 1.0 - 1e-8);
            if (prev > 0) CHECK(th.theta_omega >= prev - 1e-8);
            prev = th.theta_omega;
        }
    }
}

TEST_CASE("theta_omega_lambda branch arithmetic") {
    // first branch wins
    CHECK(theta_omega_lambda(2.0, {0.0, 0.0}, 3, 0.25, 2 * pi) == doctest::Approx(2.0));
    // Stokes case ignores lambda entirely
    CHECK(theta_omega_lambda(123.456, {0.2, 7.0}, 3, 0.5, 1.0) == doctest::Approx(123.456));
    // second branch: (3-2.9)|2.9+2|^2 / (1 * (2*2.9+1))
    const double expect = 0.1 * (4.9 * 4.9) / 6.8;
    CHECK(theta_omega_lambda(1e6, {2.9, 0.0}, 3, 0.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.3531).epsilon(1e-3));
}

TEST_CASE("theta_omega_lambda equals one branch and is below both") {
    std::uint64_t state = 2024;
    for (int i = 0; i < 100; ++i) {
        const int n = 3 + static_cast<int>(splitmix64(state) % 3);
        const double nu = 0.49 * uniform01(state);
        const double re_max = 3.0 - 4.0 * nu;
        const double re_min = -0.5 * (n - 2.0) + 1e-3;
        const double re = re_min + (re_max - re_min) * uniform01(state);
        const double im = 4.0 * (uniform01(state) - 0.5);
        const double theta = 1.0 + 10.0 * uniform01(state);
        const double branch2 =
            (3.0 - 4.0 * nu - re) * (std::norm(std::complex<double>(re + n - 1.0, im))) /
            ((1.0 - 2.0 * nu) * (2.0 * re + n - 2.0));
        const double got = theta_omega_lambda(theta, {re, im}, n, nu, 1.0);
        CHECK(got <= theta + 1e-12);
        CHECK(got <= branch2 + 1e-12);
        CHECK((got == doctest::Approx(theta) || got == doctest::Approx(branch2)));
    }
}

TEST_CASE("theta_omega_lambda preconditions") {
    CHECK_THROWS_AS(theta_omega_lambda(1.0, {-2.0, 0.0}, 3, 0.25, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_omega_lambda(1.0, {2.9, 0.0}, 3, 0.25, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_omega_lambda(1.0, {0.0, 0.0}, 3, 0.75, 1.0), std::domain_error);
}

TEST_CASE("penalized Rayleigh oracle reproduces the constrained branch") {
    // At the hemisphere with a large second branch the lambda-dependent value
    // collapses to Theta itself; an independent penalized eigensolve on the
    // same discrete form must land there too.
    const CapDomain cap(3, pi / 2);
    const auto cfg = fast_cfg(512, 1);
    const auto th = theta_omega(cap, cfg);
    const double nu = 0.25, re = 0.0;
    const double area = cap_area(cap);
    const double branch2 = (3.0 - 4.0 * nu - re) * std::pow(re + 2.0, 2) /
                           ((1.0 - 2.0 * nu) * (2.0 * re + 1.0));
    REQUIRE(branch2 > th.theta_omega);  // penalty-dominated regime
    CHECK(theta_omega_lambda(th.theta_omega, {re, 0.0}, 3, nu, area) ==
          doctest::Approx(th.theta_omega));

    // discrete penalized form: min of v'Av + C (c'v)^2 over v'Wv = 1 within the
    // axisymmetric branch; for a penalty far above Theta the constrained value
    // of that branch must reappear
    const auto op = assemble_mode_operator(3, pi / 2, 0, 512, false);
    const auto b = op.symmetrized();
    std::vector<double> d(op.w.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::sqrt(op.w[i]);
    const auto axis = lin::constrained_smallest(b, d);
    // penalized smallest eigenvalue via dense solve on B + penalty d d^T
    Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(b.size(), b.size());
    for (int i = 0; i < b.size(); ++i) {
        bm(i, i) = b.diag[i];
        if (i + 1 < b.size()) bm(i, i + 1) = bm(i + 1, i) = b.off[i];
    }
    Eigen::VectorXd dv = Eigen::Map<const Eigen::VectorXd>(d.data(), d.size());
    const double penalty = 1e8;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bm + penalty * dv * dv.transpose());
    CHECK(es.eigenvalues()(0) == doctest::Approx(axis.value).epsilon(1e-5));
}
