#include "bellfield/gkmr.hpp"

#include <cmath>

#include "bellfield/errors.hpp"

namespace bellfield::gkmr {

using numeric::euler_gamma;
using numeric::pi;

double szsz(const model::CovarianceMatrix& g) { return model::purity(g); }

double sxsx(const model::CovarianceMatrix& g) {
    model::ReducedA a = model::reduced_a(g);
    double d = a.det();
    if (!(d > 0.0) || !(a.a11 > 0.0)) throw MatrixError("sxsx: reduced matrix a is not positive definite");
    return -(2.0 / pi) * std::atan(a.a12 / std::sqrt(d));
}

double sxsz(const model::CovarianceMatrix&) { return 0.0; }

CorrelatorSet bell(const model::CovarianceMatrix& g) {
    CorrelatorSet c;
    c.purity = model::purity(g);
    c.szsz = c.purity;
    c.sxsx = sxsx(g);
    c.sxsz = sxsz(g);
    c.bell = 2.0 * std::hypot(c.szsz, c.sxsx);
    return c;
}

double chsh(const SpinCorrelations& c, double t, double tp) {
    // E(u, sin t S_x + cos t S_z) for u = S_z, S_x
    auto ez = [&](double th) { return std::sin(th) * c.zx + std::cos(th) * c.zz; };
    auto ex = [&](double th) { return std::sin(th) * c.xx + std::cos(th) * c.xz; };
    return ez(t) + ez(tp) + ex(t) - ex(tp);
}

namespace {

// maximum of A cos t + B sin t over t by bracketing and golden section
double golden_max(const std::function<double(double)>& f, double& arg) {
    const int n = 64;
    int best = 0;
    double fb = -1e300;
    for (int i = 0; i < n; ++i) {
        double v = f(2.0 * pi * i / n);
        if (v > fb) {
            fb = v;
            best = i;
        }
    }
    double a = 2.0 * pi * (best - 1) / n, b = 2.0 * pi * (best + 1) / n;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    arg = 0.5 * (a + b);
    return f(arg);
}

}  // namespace

ChshMax chsh_maximize(const SpinCorrelations& c) {
    // the CHSH value separates into a function of t plus a function of t'
    auto ft = [&](double t) { return std::sin(t) * (c.zx + c.xx) + std::cos(t) * (c.zz + c.xz); };
    auto ftp = [&](double t) { return std::sin(t) * (c.zx - c.xx) + std::cos(t) * (c.zz - c.xz); };
    ChshMax m;
    golden_max(ft, m.theta);
    golden_max(ftp, m.theta_prime);
    m.value = chsh(c, m.theta, m.theta_prime);
    return m;
}

double minkowski_bell_plateau(double delta) {
    if (!(delta > 0.0)) throw DomainError("minkowski_bell_plateau: delta must be positive");
    return 8.0 * pi * pi / (9.0 * std::fabs(1.0 - 2.0 * std::log(delta / 2.0)));
}

double minkowski_bell_approx(double alpha, double delta) {
    if (!(alpha > 0.0)) throw DomainError("minkowski_bell_approx: alpha must be positive");
    if (delta == 0.0) return 16.0 / (9.0 * pi * alpha * alpha);
    double l = 1.0 - 2.0 * std::log(delta / 2.0);
    double p3 = l / (pi * pi * pi);
    double a4 = alpha * alpha * alpha * alpha;
    return minkowski_bell_plateau(delta) * (1.0 + 2.0 / a4 * (4.0 / 81.0 + p3 * p3));
}

SpinPair desitter_smallHR_approx(double alpha, double beta, double delta, double HR) {
    const double ge = euler_gamma, l2 = std::log(2.0);
    const double h2 = HR * HR, a2 = alpha * alpha;
    SpinPair r;
    r.sxsx = 8.0 / (9.0 * pi * a2) +
             h2 * (8.0 / (9.0 * pi) * (ge + std::log(alpha * beta) - 1.0) +
                   32.0 * (5.0 * ge - 11.0 + 5.0 * std::log(2.0 * beta)) / (405.0 * a2 * pi));
    double l = 1.0 - 2.0 * std::log(delta / 2.0);
    double num = 1.0 + 2.0 * ge * (1.0 + 2.0 * l2) - 5.0 * l2 + 4.0 * l2 * l2 +
                 std::log(beta) * (2.0 - 4.0 * std::log(delta / 2.0)) +
                 (7.0 - 4.0 * ge - 4.0 * l2) * std::log(delta);
    r.szsz = 4.0 * pi * pi / (9.0 * std::fabs(l)) + 8.0 * pi * pi / 81.0 * h2 * num / (l * std::fabs(l));
    return r;
}

SpinPair desitter_largeHR_approx(double alpha, double beta, double delta, double HR) {
    const double ge = euler_gamma, l2 = std::log(2.0);
    SpinPair r;
    double num = 4.0 * (1.0 - ge - std::log(alpha * beta));
    double den = (3.0 + 4.0 * std::log(alpha / 2.0)) *
                 (11.0 - 8.0 * ge - 4.0 * std::log(2.0 * alpha * beta * beta));
    r.sxsx = 2.0 / pi * std::atan(num / std::sqrt(den));
    double ld = 1.0 - 2.0 * std::log(delta / 2.0);
    double f1 = 4.0 * ge * (1.0 + 2.0 * l2) - 1.0 - 9.0 * l2 + 4.0 * l2 * l2 +
                2.0 * std::log(alpha * beta * beta) * ld + std::log(delta) * (11.0 - 8.0 * ge - 4.0 * l2);
    double f2 = 3.0 - l2 + 4.0 * l2 * l2 - std::log(alpha) * (2.0 - 4.0 * std::log(delta / 2.0)) +
                (3.0 - 4.0 * l2) * std::log(delta);
    r.szsz = 2.0 * pi * pi / (HR * HR) / std::sqrt(f1 * f2);
    return r;
}

McCorrelators mc_correlators(const model::CovarianceMatrix& g, int n_samples, std::uint64_t seed,
                             double h) {
    if (!(h > 0.0)) throw DomainError("mc_correlators: smoothing width must be positive");
    const double tp = 2.0 * pi;
    auto sgn = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
    auto dh = [h](double x) { return std::exp(-0.5 * x * x / (h * h)) / (std::sqrt(2.0 * pi) * h); };
    // q = (phi1, pi1, phi2, pi2); W_Sx = sign(phi)/(2pi), W_Sz = -delta(phi) delta(pi)/2
    std::vector<numeric::PhaseFunction> fs = {
        [&](const numeric::PhasePoint& q) { return sgn(q[0]) * sgn(q[2]) / (tp * tp); },
        [&](const numeric::PhasePoint& q) { return -0.5 * sgn(q[0]) / tp * dh(q[2]) * dh(q[3]); },
    };
    auto r = numeric::gaussian_mc_expectations(g.full(), fs, n_samples, seed);
    McCorrelators m;
    m.sxsx = r[0];
    m.sxsz = r[1];
    // the product of smoothed deltas is itself a Gaussian density, so its
    // expectation is sampled from the kernel side: (2pi)^2 W(u) / 4, u ~ N(0, h^2 I).
    // Sampling the Wigner function and weighting by the narrow kernel is
    // dominated by rare hits once the field variance is large.
    const linalg::Mat4 inv = linalg::inverse(g.full());
    const double norm = 0.25 / std::sqrt(model::det(g));
    numeric::CounterRng rng(seed, 1);
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        double u[4];
        for (double& x : u) x = h * rng.normal();
        double quad = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) quad += u[i] * inv[i][j] * u[j];
        double v = norm * std::exp(-0.5 * quad);
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n_samples;
    m.szsz_smoothed.mean = mean;
    m.szsz_smoothed.std_error = std::sqrt(std::max(0.0, sum2 / n_samples - mean * mean) / (n_samples - 1.0));
    model::CovarianceMatrix gs = g;
    gs.g11 += h * h;
    gs.g22 += h * h;
    m.szsz_smoothed_exact = 1.0 / (4.0 * std::sqrt(model::det(gs)));
    return m;
}

double szsz_from_wigner_origin(const model::CovarianceMatrix& g) {
    linalg::Mat4 l = linalg::cholesky(g.full());
    double sqrt_det = 1.0;
    for (int i = 0; i < 4; ++i) sqrt_det *= l[i][i];
    double w0 = 1.0 / (4.0 * pi * pi * sqrt_det);
    return 4.0 * pi * pi * w0 / 4.0;
}

}  // namespace bellfield::gkmr
