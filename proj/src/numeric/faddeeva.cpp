// Faddeeva function via Weideman's rational approximation
// (SIAM J. Numer. Anal. 31 (1994) 1497), plus erf for complex argument.
#include <array>
#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/numeric.hpp"

namespace bellfield::numeric {

namespace {

constexpr int kTerms = 40;
const double kSqrtPi = std::sqrt(pi);

struct Weideman {
    double L;
    std::array<double, kTerms> coef;  // highest power first

    Weideman() {
        const int M = 2 * kTerms;
        const int M2 = 2 * M;
        L = std::sqrt(kTerms / std::sqrt(2.0));
        std::array<double, 2 * M> g{};
        for (int k = -M + 1; k <= M - 1; ++k) {
            double t = L * std::tan(k * pi / (2.0 * M));
            g[k + M] = std::exp(-t * t) * (L * L + t * t);
        }
        // real part of the DFT of the even sequence g
        for (int j = 1; j <= kTerms; ++j) {
            double s = 0.0;
            for (int k = -M + 1; k <= M - 1; ++k) s += g[k + M] * std::cos(pi * k * j / M);
            coef[kTerms - j] = s / M2;
        }
    }

    cplx operator()(cplx z) const {
        cplx lz = cplx(L, 0.0) - cplx(0.0, 1.0) * z;
        cplx Z = (cplx(L, 0.0) + cplx(0.0, 1.0) * z) / lz;
        cplx p = 0.0;
        for (double c : coef) p = p * Z + c;
        return 2.0 * p / (lz * lz) + (1.0 / kSqrtPi) / lz;
    }
};

const Weideman& weideman() {
    static const Weideman w;
    return w;
}

// Maclaurin series of erf, fine for |z| < 1
cplx erf_series(cplx z) {
    cplx z2 = z * z;
    cplx term = z;
    cplx sum = z;
    for (int n = 1; n < 60; ++n) {
        term *= -z2 / double(n);
        cplx d = term / double(2 * n + 1);
        sum += d;
        if (std::abs(d) < 1e-17 * std::abs(sum)) break;
    }
    return sum * (2.0 / kSqrtPi);
}

}  // namespace

cplx faddeeva(cplx z) {
    if (z.imag() >= 0.0) return weideman()(z);
    // w(z) = 2 exp(-z^2) - w(-z)
    return 2.0 * std::exp(-z * z) - weideman()(-z);
}

cplx erf_complex(cplx z) {
    double x = z.real(), y = z.imag();
    if (y == 0.0) return std::erf(x);
    if (y * y - x * x > erf_overflow_exponent)
        throw RangeError("erf_complex: |erf(z)| overflows for this argument");
    if (std::abs(z) < 1.0) return erf_series(z);
    if (x < 0.0) return -erf_complex(-z);
    // erf(z) = 1 - exp(-z^2) w(iz), iz in the upper half plane for x >= 0
    cplx iz(-y, x);
    return 1.0 - std::exp(-z * z) * weideman()(iz);
}

cplx erf_complex_scaled(cplx z) {
    double x = z.real(), y = z.imag();
    if (y == 0.0) return std::erf(x);
    if (std::abs(z) < 1.0) return std::exp(-y * y) * erf_series(z);
    double sgn = 1.0;
    if (x < 0.0) {
        x = -x;
        y = -y;
        sgn = -1.0;
    }
    // exp(-y^2) exp(-z^2) = exp(-x^2 - 2ixy)
    cplx iz(-y, x);
    cplx phase = std::exp(cplx(-x * x, -2.0 * x * y));
    return sgn * (std::exp(-y * y) - phase * weideman()(iz));
}

}  // namespace bellfield::numeric
