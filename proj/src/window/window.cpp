#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/window.hpp"

namespace bellfield::window {

namespace {
constexpr int kCoefficients = 90;
}

double F_of(double d) { return (d + 2.0) * (d * d + 2.0 * d + 2.0) / 4.0; }

double G_of(double d) {
    double a = d + 2.0, b = d * d + 2.0 * d + 2.0;
    return 8.0 * (d * d * d + 5.0 * d * d + 10.0 * d + 10.0) / (5.0 * a * a * b * b);
}

WindowSpec::WindowSpec(double delta) : delta_(delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("WindowSpec: delta must be positive and finite");
    F_ = F_of(delta);
    G_ = G_of(delta);
    // w_m = 6 (-1)^m (m+1) (c^(2m+4) - 1) / ((2m+4)! delta F), in logs to survive large m
    const double lc = std::log1p(delta);
    const double ldf = std::log(delta * F_);
    w_.resize(kCoefficients);
    for (int m = 0; m < kCoefficients; ++m) {
        double t = (2.0 * m + 4.0) * lc;
        double lnum = (t < 1.0) ? std::log(std::expm1(t)) : t + std::log1p(-std::exp(-t));
        double lw = std::log(6.0 * (m + 1)) + lnum - std::lgamma(2.0 * m + 5.0) - ldf;
        double v = std::exp(lw);
        w_[m] = (m % 2 == 0) ? v : -v;
    }
    w_[0] = 1.0;
    g_.assign(kCoefficients, 0.0);
    for (int k = 0; k < kCoefficients; ++k)
        for (int i = 0; i <= k; ++i) g_[k] += w_[i] * w_[k - i];
}

double window_value(double x, const WindowSpec& w) {
    if (x < 0.0) throw DomainError("window_value: x must be >= 0");
    double plateau = 3.0 / (4.0 * numeric::pi * w.F());
    if (x <= 1.0) return plateau;
    if (x <= w.edge()) return plateau * (1.0 - (x - 1.0) / w.delta());
    return 0.0;
}

double window_fourier(double z, const WindowSpec& w) {
    if (z < 0.0) throw DomainError("window_fourier: z must be >= 0");
    const double d = w.delta();
    const double c = 1.0 + d;
    if (c * z < series_switch) {
        const auto& co = w.wt_coefficients();
        double z2 = z * z, p = 1.0, s = 0.0;
        for (double wm : co) {
            double t = wm * p;
            s += t;
            if (std::fabs(t) < 1e-18 * std::fabs(s)) break;
            p *= z2;
        }
        return s;
    }
    // sin z - c sin cz and cos z - cos cz written without the O(delta) cancellation
    double hs = std::sin(0.5 * d * z);
    double A = -2.0 * std::cos(0.5 * (2.0 + d) * z) * hs - d * std::sin(c * z);
    double B = 2.0 * std::sin(0.5 * (2.0 + d) * z) * hs;
    double z2 = z * z;
    return 3.0 * (z * A + 2.0 * B) / (d * w.F() * z2 * z2);
}

double window_fourier_tophat(double z) {
    if (z < 0.0) throw DomainError("window_fourier_tophat: z must be >= 0");
    if (z < 0.5) {
        double z2 = z * z, p = 1.0, s = 0.0, f = 6.0;  // (2n+1)! at n=1
        for (int n = 1; n < 20; ++n) {
            double t = ((n % 2) ? 1.0 : -1.0) * 2.0 * n * p / f;
            s += t;
            p *= z2;
            f *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
        }
        return 3.0 * s;
    }
    return 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
}

}  // namespace bellfield::window
