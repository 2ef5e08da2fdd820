#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/linalg.hpp"
#include "bellfield/numeric.hpp"

#ifdef BELLFIELD_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace bellfield;
using namespace bellfield::numeric;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

linalg::Mat4 spd() {
    return {{{2.0, 0.3, 0.5, -0.1}, {0.3, 1.5, 0.2, 0.4}, {0.5, 0.2, 2.2, 0.3}, {-0.1, 0.4, 0.3, 1.1}}};
}

}  // namespace

// reference values: 30-digit mpmath

TEST_CASE("cosine and sine integrals") {
    CHECK(rel(cosine_integral(0.5), -0.177784078806612901335810271071) < 1e-13);
    CHECK(rel(cosine_integral(5.0), -0.190029749656643878618458900116) < 1e-13);
    CHECK(rel(cosine_integral(50.0), -0.00562838632411630544018589549846) < 1e-12);
    CHECK(rel(sine_integral(0.5), 0.493107418043066689161626707573) < 1e-13);
    CHECK(rel(sine_integral(5.0), 1.54993124494467413727440840073) < 1e-13);
    CHECK(rel(sine_integral(50.0), 1.55161707248593589472798559486) < 1e-13);
    // small-x limit Ci(x) ~ gamma + ln x
    CHECK(std::abs(cosine_integral(1e-8) - (euler_gamma + std::log(1e-8))) < 1e-14);
    CHECK_THROWS_AS(cosine_integral(0.0), DomainError);
    CHECK_THROWS_AS(cosine_integral(-1.0), DomainError);
}

TEST_CASE("generalized exponential integral") {
    CHECK(rel(expint(1, {1.0, 0.0}), cplx(0.21938393439552027367716377546, 0.0)) < 1e-13);
    CHECK(rel(expint(2, {0.0, -3.0}), cplx(-0.156423892986730545772347116315, -0.217769349964133760778672040722)) <
          1e-13);
    CHECK(rel(expint(3, {0.5, 2.0}), cplx(-0.142253097855832942550438055196, -0.0750807228949521672989773192403)) <
          1e-13);
    CHECK(rel(expint(5, {0.0, -40.0}), cplx(-0.020321924198482436218826873689, -0.014101262687374456188763596674)) <
          1e-13);
    // E1(ix) = -Ci(x) + i(Si(x) - pi/2)
    cplx e = expint(1, {0.0, 7.0});
    CHECK(std::abs(e.real() + cosine_integral(7.0)) < 1e-13);
    CHECK(std::abs(e.imag() - (sine_integral(7.0) - pi / 2)) < 1e-13);
    CHECK_THROWS_AS(expint(0, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(expint(1, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(expint(2, {-1.0, 0.0}), DomainError);
}

TEST_CASE("complex error function") {
    struct Ref {
        cplx z, v;
    };
    const Ref refs[] = {
        {{0.5, 0.5}, {0.642612914854820528319421358472, 0.457881394435192215842088900635}},
        {{2.0, 1.0}, {1.00360634272565175091291182821, -0.0112590060288150250764009156316}},
        {{3.0, -2.0}, {0.998963278856817268880410904698, 0.0000115467243792906034063057714197}},
        {{0.1, 4.0}, {896390.588426971683731627913323, 918683.226961449826829451904302}},
        {{-1.0, 0.01}, {-0.842742304391298145064365226211, 0.00415093659812153041549449371754}},
        {{1e-3, 2e-3}, {0.00112838330449041830140426459725, 0.00225675908643951541014187185331}},
        {{6.0, 6.0}, {1.05763424013567858929045441627, -0.0331391147411565004921458238409}},
    };
    for (const Ref& r : refs) {
        CAPTURE(r.z);
        CHECK(rel(erf_complex(r.z), r.v) < 1e-12);
    }
    CHECK(erf_complex({0.0, 0.0}) == cplx(0.0, 0.0));
    // odd and conjugate symmetric
    cplx z(0.7, -1.3);
    CHECK(std::abs(erf_complex(-z) + erf_complex(z)) < 1e-15);
    CHECK(std::abs(erf_complex(std::conj(z)) - std::conj(erf_complex(z))) < 1e-15);
    for (double x : {-3.0, -0.4, 0.0, 0.2, 1.7, 5.0}) CHECK(std::abs(erf_complex({x, 0.0}).real() - std::erf(x)) < 1e-15);
    CHECK_THROWS_AS(erf_complex({0.0, 30.0}), RangeError);
    // the scaled variant stays finite there
    cplx s = erf_complex_scaled({0.0, 30.0});
    CHECK(std::isfinite(s.real()));
    CHECK(std::isfinite(s.imag()));
    CHECK(rel(erf_complex_scaled({0.1, 4.0}), std::exp(-16.0) * erf_complex({0.1, 4.0})) < 1e-12);
}

TEST_CASE("Faddeeva function") {
    CHECK(rel(faddeeva({1.0, 1.0}), cplx(0.30474420525691259245713884107, 0.208218938202831627287437347255)) < 1e-12);
    CHECK(rel(faddeeva({5.0, 0.1}), cplx(0.00240691171694271195048879977871, 0.115194424550727687173397455883)) <
          1e-12);
    CHECK(rel(faddeeva({0.01, 20.0}), cplx(0.0281743417410858643909431066851, 0.0000140521710519213014589836728553)) <
          1e-12);
}

TEST_CASE("adaptive quadrature") {
    CHECK(std::abs(adaptive_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) - 2.0 / 3.0) < 1e-10);
    CHECK(std::abs(adaptive_integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY) - 1.0) < 1e-10);
    CHECK(std::abs(adaptive_integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, INFINITY) - pi / 2) <
          1e-10);
    QuadResult r = integrate([](double x) { return std::cos(30.0 * x); }, 0.0, 2.0);
    CHECK(std::abs(r.value - std::sin(60.0) / 30.0) < 1e-11);
    CHECK(r.error < 1e-9);
    QuadResult p = integrate_panels([](double x) { return std::sin(x) / x; }, 1e-12, 200.0, 40);
    CHECK(std::abs(p.value - sine_integral(200.0)) < 1e-9);
    QuadratureSpec tight;
    tight.max_subdivisions = 2;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight), ConvergenceError);
    QuadratureSpec bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("Gauss-Legendre rules") {
    const GaussRule& g = gauss_legendre(10);
    double w = 0.0, m18 = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        w += g.weights[i];
        m18 += g.weights[i] * std::pow(g.nodes[i], 18);
    }
    CHECK(std::abs(w - 2.0) < 1e-14);
    CHECK(std::abs(m18 - 2.0 / 19.0) < 1e-14);
    CHECK(&gauss_legendre(10) == &g);
}

TEST_CASE("truncated double sum") {
    // (sum_n e^{-n^2})^2
    auto t = [](int n, int m) { return std::exp(-double(n) * n - double(m) * m); };
    DoubleSumResult r = truncated_double_sum(t, 1e-16, 50);
    CHECK(std::abs(r.value - 3.14224265993564633914314598537) < 1e-14);
    CHECK(r.last_shell < 1e-16);
    DoubleSumResult forced = truncated_double_sum(t, 1e-3, 50, 10);
    CHECK(forced.shells == 10);
    CHECK_THROWS_AS(truncated_double_sum(t, 1e-30, 3), ConvergenceError);
    try {
        truncated_double_sum(t, 1e-30, 3);
    } catch (const ConvergenceError& e) {
        CHECK(e.error_bound > 0.0);
        CHECK(std::abs(e.estimate - 3.14224265993564633914314598537) < 1e-6);
    }
}

TEST_CASE("Philox4x32-10 known answers") {
    auto a = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(a == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    auto b = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(b == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    auto c = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(c == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter RNG streams are reproducible") {
    CounterRng a(42), b(42), c(42, 1);
    double sa = 0, sc = 0;
    for (int i = 0; i < 100; ++i) {
        double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        sa += x;
        sc += c.uniform();
    }
    CHECK(sa != sc);
    CounterRng n(7);
    double m = 0, v = 0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
        double x = n.normal();
        m += x;
        v += x * x;
    }
    CHECK(std::abs(m / N) < 0.01);
    CHECK(std::abs(v / N - 1.0) < 0.01);
}

TEST_CASE("Gaussian Monte Carlo expectation") {
    linalg::Mat4 g = spd();
    const double norm = 1.0 / (4.0 * pi * pi);
    McResult one = gaussian_mc_expectation(g, [&](const PhasePoint&) { return norm; }, 10000, 1);
    CHECK(std::abs(one.mean - 1.0) < 1e-12);
    auto r = gaussian_mc_expectations(
        g, {[&](const PhasePoint& q) { return norm * q[0] * q[2]; }, [&](const PhasePoint& q) { return norm * q[1] * q[1]; }},
        400000, 3);
    CHECK(std::abs(r[0].mean - g[0][2]) < 4 * r[0].std_error);
    CHECK(std::abs(r[1].mean - g[1][1]) < 4 * r[1].std_error);
    auto again = gaussian_mc_expectation(g, [&](const PhasePoint& q) { return norm * q[0] * q[2]; }, 400000, 3);
    CHECK(again.mean == r[0].mean);
    CHECK_THROWS_AS(gaussian_mc_expectation(g, [](const PhasePoint&) { return 1.0; }, 10, 1), DomainError);
}

TEST_CASE("small dense linear algebra") {
    linalg::Mat4 m = spd();
    linalg::Mat4 inv = linalg::inverse(m);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += m[i][k] * inv[k][j];
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-14);
        }
    linalg::Mat4 l = linalg::cholesky(m);
    double prod = 1.0;
    for (int i = 0; i < 4; ++i) prod *= l[i][i];
    CHECK(rel(prod * prod, linalg::det(m)) < 1e-14);
    CHECK(linalg::is_symmetric(m));
    linalg::Mat2 a{{{2.0, 1.0}, {1.0, 3.0}}};
    CHECK(linalg::det(a) == 5.0);
    linalg::Mat2 ai = linalg::inverse(a);
    CHECK(std::abs(ai[0][0] - 0.6) < 1e-15);
    CHECK(std::abs(ai[0][1] + 0.2) < 1e-15);
    linalg::Mat4 sing{};
    CHECK_THROWS_AS(linalg::inverse(sing), MatrixError);
    linalg::Mat4 indef = linalg::identity4();
    indef[3][3] = -1.0;
    CHECK_THROWS_AS(linalg::cholesky(indef), MatrixError);
    CHECK(linalg::condition_number(linalg::identity4()) == doctest::Approx(1.0));
#ifdef BELLFIELD_HAVE_EIGEN
    Eigen::Matrix4d e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e(i, j) = m[i][j];
    CHECK(rel(linalg::det(m), e.determinant()) < 1e-14);
    Eigen::Matrix4d ei = e.inverse();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(inv[i][j] - ei(i, j)) < 1e-14);
#endif
}
