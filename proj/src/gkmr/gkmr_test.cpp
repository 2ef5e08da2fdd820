#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/gkmr.hpp"

using namespace bellfield;
using namespace bellfield::gkmr;
using model::Background;
using model::CovarianceMatrix;
using numeric::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

CovarianceMatrix flat(double alpha, double delta, double beta = 0.0) {
    return model::build_covariance({Background::Minkowski, 0.0, alpha, beta, delta});
}

CovarianceMatrix desitter(double hr, double alpha, double delta, double beta) {
    return model::build_covariance({Background::DeSitter, hr, alpha, beta, delta});
}

}  // namespace

TEST_CASE("vacuum of uncoupled oscillators") {
    CovarianceMatrix g{0.5, 0.0, 0.5, 0.0, 0.0, 0.0};
    CorrelatorSet c = bell(g);
    CHECK(c.szsz == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.sxsx == 0.0);
    CHECK(c.sxsz == 0.0);
    CHECK(c.bell == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("S_x correlator at arctan(1)") {
    // gamma_13 = -gamma_11 / sqrt 2 gives a12 = sqrt(a11 a22 / 2)
    CovarianceMatrix g{1.0, 0.0, 1.0, -1.0 / std::sqrt(2.0), 0.0, 0.0};
    CHECK(sxsx(g) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("flat-space S_x correlator from the moment integrals") {
    for (double a : {2.2, 3.0, 10.0}) {
        double k1 = window::integral_K({1, 0.0, 0.0, 0.1}), l1 = window::integral_L({1, a, 0.0, 0.1});
        double expect = 2.0 / pi * std::atan(l1 / std::sqrt(k1 * k1 - l1 * l1));
        CHECK(rel(sxsx(flat(a, 0.1)), expect) < 1e-12);
        CHECK(sxsx(flat(a, 0.1)) >= 0.0);
    }
}

TEST_CASE("S_z correlator is the purity") {
    for (double a : {2.02, 5.0, 100.0}) {
        CovarianceMatrix g = flat(a, 0.01);
        CHECK(szsz(g) == model::purity(g));
        CHECK(bell(g).purity == bell(g).szsz);
        CHECK(rel(szsz_from_wigner_origin(g), szsz(g)) < 1e-13);
    }
}

TEST_CASE("flat space at delta = 0.01, alpha = 1000") {
    CorrelatorSet c = bell(flat(1e3, 0.01));
    // pinned from the quadrature-verified pipeline
    CHECK(rel(c.szsz, 0.374221022195457) < 1e-9);
    CHECK(rel(c.bell, 0.748442044391132) < 1e-9);
    // the small-delta leading term 4 pi^2 / (9 |1 - 2 ln(delta/2)|) drops O(delta) pieces
    CHECK(rel(c.szsz, 4.0 * pi * pi / (9.0 * 11.5966)) < 1.5e-2);
    CHECK(c.bell == doctest::Approx(2.0 * std::hypot(c.szsz, c.sxsx)).epsilon(1e-15));
}

TEST_CASE("Bell value at adjacent patches") {
    CHECK(std::abs(bell(flat(2.02, 0.01)).bell - 0.8) < 0.1);
    CHECK(std::abs(bell(flat(2.0 * 11.0, 10.0)).bell - 1.6) < 0.1);
    CHECK(std::abs(bell(flat(2.0 * 101.0, 100.0)).bell - 1.6) < 0.1);
}

TEST_CASE("B decreases with separation toward its plateau") {
    double prev = bell(flat(2.02, 0.01)).bell;
    const double plateau = bell(flat(1e4, 0.01)).bell;
    for (double a = 2.1; a < 1e3; a *= 1.25) {
        double b = bell(flat(a, 0.01)).bell;
        CAPTURE(a);
        CHECK(b < prev);
        CHECK(b > plateau);
        prev = b;
    }
}

TEST_CASE("small-delta, large-alpha approximation") {
    CHECK(rel(minkowski_bell_plateau(0.01), 8.0 * pi * pi / (9.0 * std::abs(1.0 - 2.0 * std::log(0.005)))) < 1e-15);
    CHECK(std::abs(minkowski_bell_plateau(0.01) - 0.7566) < 1e-4);
    CHECK(rel(minkowski_bell_approx(1e6, 0.01), minkowski_bell_plateau(0.01)) < 1e-15);
    CHECK(minkowski_bell_approx(5.0, 0.01) > minkowski_bell_plateau(0.01));
    for (double a : {10.0, 30.0, 100.0, 1e3}) CHECK(rel(minkowski_bell_approx(a, 0.01), bell(flat(a, 0.01)).bell) < 0.02);
    CHECK(rel(minkowski_bell_approx(7.0, 0.0), 16.0 / (9.0 * pi * 49.0)) < 1e-15);
}

TEST_CASE("de Sitter expansions") {
    SpinPair s0 = desitter_smallHR_approx(3.0, 1e-4, 1e-2, 0.0);
    CHECK(s0.sxsx == doctest::Approx(8.0 / (9.0 * pi * 9.0)).epsilon(1e-15));
    CHECK(desitter_smallHR_approx(3.0, 1e-2, 1e-2, 0.0).sxsx == s0.sxsx);
    CHECK(rel(s0.szsz, 4.0 * pi * pi / (9.0 * std::abs(1.0 - 2.0 * std::log(5e-3)))) < 1e-15);

    CorrelatorSet full = bell(desitter(1e-2, 3.0, 1e-2, 1e-4));
    SpinPair small = desitter_smallHR_approx(3.0, 1e-4, 1e-2, 1e-2);
    CHECK(rel(small.szsz, full.szsz) < 0.05);
    CHECK(rel(2.0 * std::hypot(small.sxsx, small.szsz), full.bell) < 0.05);
    // S_x: the alpha^-4 remainder of the leading term is about 7% at alpha = 3
    CHECK(rel(small.sxsx, full.sxsx) < 0.08);

    CorrelatorSet big = bell(desitter(1e3, 3.0, 1e-2, 1e-4));
    SpinPair large = desitter_largeHR_approx(3.0, 1e-4, 1e-2, 1e3);
    CHECK(rel(large.sxsx, big.sxsx) < 0.1);
    CHECK(rel(large.szsz, big.szsz) < 0.1);
    SpinPair larger = desitter_largeHR_approx(3.0, 1e-4, 1e-2, 2e3);
    CHECK(larger.sxsx == large.sxsx);
    CHECK(rel(large.szsz / larger.szsz, 4.0) < 1e-12);
}

TEST_CASE("CHSH over explicit angles") {
    SpinCorrelations c{0.4, 0.0, 0.0, 0.3};
    // theta = theta' = 0 measures S_z twice: 2 <S_z S_z> from the a-terms, 0 from the a'-terms
    CHECK(chsh(c, 0.0, 0.0) == doctest::Approx(2.0 * 0.4));
    ChshMax m = chsh_maximize(c);
    CHECK(std::abs(m.value - 2.0 * std::hypot(0.4, 0.3)) < 1e-9);
    for (double a : {2.2, 4.0}) {
        CorrelatorSet s = bell(desitter(3.0, a, 0.1, 1e-3));
        ChshMax mm = chsh_maximize({s.szsz, s.sxsz, s.sxsz, s.sxsx});
        CHECK(std::abs(mm.value - s.bell) < 1e-9);
        CHECK(std::abs(chsh({s.szsz, 0.0, 0.0, s.sxsx}, mm.theta, mm.theta_prime) - s.bell) < 1e-9);
    }
}

TEST_CASE("phase-space oracle") {
    for (CovarianceMatrix g : {flat(3.0, 0.1), desitter(0.5, 2.5, 0.05, 1e-3), desitter(30.0, 4.0, 0.02, 1e-4)}) {
        McCorrelators mc = mc_correlators(g, 200000, 11);
        CHECK(std::abs(mc.sxsx.mean - sxsx(g)) < 3.0 * mc.sxsx.std_error);
        CHECK(std::abs(mc.szsz_smoothed.mean - mc.szsz_smoothed_exact) < 3.0 * mc.szsz_smoothed.std_error);
        CHECK(std::abs(mc.sxsz.mean) < 3.0 * mc.sxsz.std_error);
        CHECK(sxsz(g) == 0.0);
    }
    CovarianceMatrix g = flat(3.0, 0.1);
    CovarianceMatrix s = g;
    s.g11 += 1e-10;
    s.g22 += 1e-10;
    CHECK(rel(szsz(s), szsz(g)) < 1e-8);
    CHECK_THROWS_AS(mc_correlators(g, 100000, 1, 0.0), DomainError);
}

TEST_CASE("errors propagate") {
    CovarianceMatrix bad{0.2, 0.0, 0.2, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(szsz(bad), UnphysicalStateError);
    CHECK_THROWS_AS(bell(bad), Error);
}
