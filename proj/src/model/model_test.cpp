#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/model.hpp"

using namespace bellfield;
using namespace bellfield::model;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_rel(const CovarianceMatrix& a, const CovarianceMatrix& b, double floor) {
    const double va[6] = {a.g11, a.g12, a.g22, a.g13, a.g14, a.g24};
    const double vb[6] = {b.g11, b.g12, b.g22, b.g13, b.g14, b.g24};
    double m = 0.0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(va[i] - vb[i]) / std::max(std::abs(vb[i]), floor));
    return m;
}

}  // namespace

TEST_CASE("flat-space entries from the moment integrals") {
    SceneParams s{Background::Minkowski, 0.0, 3.0, 1e-3, 0.1};
    CovarianceMatrix g = build_covariance(s);
    const double n = 1.0 / (3.0 * numeric::pi * window::G_of(0.1));
    CHECK(rel(g.g11, n * window::integral_K({1, 0.0, 1e-3, 0.1})) < 1e-15);
    CHECK(rel(g.g22, n * window::integral_K({3, 0.0, 1e-3, 0.1})) < 1e-15);
    CHECK(rel(g.g13, n * window::integral_L({1, 3.0, 1e-3, 0.1})) < 1e-15);
    CHECK(rel(g.g24, n * window::integral_L({3, 3.0, 1e-3, 0.1})) < 1e-15);
    CHECK(g.g12 == 0.0);
    CHECK(g.g14 == 0.0);
}

TEST_CASE("de Sitter entries from the moment integrals") {
    SceneParams s{Background::DeSitter, 0.7, 3.0, 1e-3, 0.1};
    CovarianceMatrix g = build_covariance(s);
    const double n = 1.0 / (3.0 * numeric::pi * window::G_of(0.1)), h = 0.7;
    auto K = [](int mu) { return window::integral_K({mu, 0.0, 1e-3, 0.1}); };
    auto L = [](int mu) { return window::integral_L({mu, 3.0, 1e-3, 0.1}); };
    CHECK(rel(g.g11, n * (h * h * K(-1) + K(1))) < 1e-15);
    CHECK(rel(g.g12, -n * h * K(1)) < 1e-15);
    CHECK(rel(g.g13, n * (h * h * L(-1) + L(1))) < 1e-15);
    CHECK(rel(g.g14, -n * h * L(1)) < 1e-15);
    CHECK(rel(g.g22, n * K(3)) < 1e-15);
    CHECK(rel(g.g24, n * L(3)) < 1e-15);
}

TEST_CASE("closed-form covariance agrees with the spectral integrals") {
    for (double d : {0.03, 0.1, 0.5}) {
        SceneParams m{Background::Minkowski, 0.0, 2.0 * (1.0 + d) + 0.5, 1e-3, d};
        CAPTURE(d);
        CHECK(max_rel(build_covariance(m), covariance_from_spectra(minkowski_spectra(), m), 1e-3) < 1e-7);
        for (double hr : {0.05, 1.0, 20.0}) {
            SceneParams s{Background::DeSitter, hr, 2.0 * (1.0 + d) + 0.5, 1e-3, d};
            CAPTURE(hr);
            CHECK(max_rel(build_covariance(s), covariance_from_spectra(desitter_spectra(hr), s), 1e-3) < 1e-7);
        }
    }
}

TEST_CASE("sub-Hubble patches reduce to flat space") {
    SceneParams ds{Background::DeSitter, 1e-6, 3.0, 1e-4, 1e-2};
    SceneParams mk = ds;
    mk.background = Background::Minkowski;
    CovarianceMatrix a = build_covariance(ds), b = build_covariance(mk);
    CHECK(rel(a.g11, b.g11) < 1e-6);
    CHECK(rel(a.g13, b.g13) < 1e-6);
    CHECK(a.g22 == b.g22);
    CHECK(a.g24 == b.g24);
    CHECK(std::abs(a.g12) < 1e-6 * std::sqrt(b.g11 * b.g22));
    CHECK(std::abs(a.g14) < 1e-6 * std::sqrt(b.g11 * b.g22));
}

TEST_CASE("physical states on a parameter grid") {
    for (Background bg : {Background::Minkowski, Background::DeSitter})
        for (double d : {0.01, 0.1, 1.0})
            for (double a : {0.0, 1.0, 10.0})
                for (double hr : {1e-3, 1.0, 1e3}) {
                    SceneParams s{bg, hr, 2.0 * (1.0 + d) + a, 1e-4, d};
                    CovarianceMatrix g = build_covariance(s);
                    CAPTURE(d);
                    CAPTURE(a);
                    CAPTURE(hr);
                    CHECK(det(g) >= 1.0 / 16.0 - 1e-9);
                    double p = purity(g);
                    CHECK(p > 0.0);
                    CHECK(p <= 1.0);
                    CHECK(linalg::is_symmetric(g.full()));
                    // exchanging the patches leaves gamma unchanged
                    linalg::Mat4 f = g.full(), x{};
                    constexpr int sw[4] = {2, 3, 0, 1};
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) x[i][j] = f[sw[i]][sw[j]];
                    CHECK(x == f);
                    linalg::cholesky(f);
                }
}

TEST_CASE("reduced field block") {
    SceneParams s{Background::DeSitter, 2.0, 3.0, 1e-3, 0.1};
    CovarianceMatrix g = build_covariance(s);
    ReducedA a = reduced_a(g);
    // the Schur complement of the momentum block of gamma^-1 is the inverse field block of gamma
    double d = g.g11 * g.g11 - g.g13 * g.g13;
    CHECK(rel(a.a11, g.g11 / d) < 1e-10);
    CHECK(rel(a.a12, -g.g13 / d) < 1e-10);
    CHECK(rel(a.a22, g.g11 / d) < 1e-10);
    InverseBlocks b = inverse_blocks(g);
    CHECK(rel(linalg::det(b.pp) * a.det(), 1.0 / det(g)) < 1e-10);
}

TEST_CASE("purity of the flat-space state at alpha = 3, delta = 0.1") {
    // cross-checked against the Monte-Carlo Wigner oracle
    CovarianceMatrix g = build_covariance({Background::Minkowski, 0.0, 3.0, 0.0, 0.1});
    CHECK(rel(purity(g), 0.566050581065607) < 1e-9);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(build_covariance({Background::Minkowski, 0.0, 2.0, 0.0, 0.1}), DomainError);
    CHECK_THROWS_AS(build_covariance({Background::Minkowski, 0.0, 3.0, 1.0, 0.1}), DomainError);
    CHECK_THROWS_AS(build_covariance({Background::Minkowski, 0.0, 3.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(build_covariance({Background::DeSitter, 0.0, 3.0, 1e-3, 0.1}), DomainError);
    CHECK_THROWS_AS(build_covariance({Background::DeSitter, 1.0, 3.0, 0.0, 0.1}), DivergenceError);
    CHECK_NOTHROW(build_covariance({Background::Minkowski, 0.0, 2.2, 0.0, 0.1}));
    CovarianceMatrix bad{0.2, 0.0, 0.2, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(purity(bad), UnphysicalStateError);
    CovarianceMatrix singular{1.0, 0.0, 1.0, 1.0 - 1e-14, 0.0, 0.0};
    CHECK_THROWS_AS(inverse_blocks(singular), ConditioningError);
    CHECK_THROWS_AS(desitter_spectra(0.0), DomainError);
}
