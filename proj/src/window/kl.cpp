// Moment integrals of Wt^2, with and without sinc(alpha z).
//
// Analytic path. Wt(z) = 3 N(z) / (delta F z^4) with N = z A + 2 B,
// A = sin z - c sin cz, B = cos z - cos cz, c = 1 + delta. Expanding N^2 gives a
// short list of z^j cos/sin(omega z) terms, so above a matching point zc every
// piece is an incomplete gamma/exponential integral zc^(1-q) E_q(-i omega zc).
// Below zc the Maclaurin series of Wt^2 is integrated term by term.
#include <cmath>
#include <optional>
#include <vector>

#include "bellfield/errors.hpp"
#include "bellfield/window.hpp"

namespace bellfield::window {

using numeric::cplx;

const char* method_name(Method m) {
    switch (m) {
        case Method::Split: return "split";
        case Method::Multipole: return "multipole";
        case Method::Quadrature: return "quadrature";
    }
    return "?";
}

void IntegralParams::validate(bool needs_alpha) const {
    if (mu != -1 && mu != 1 && mu != 3) throw DomainError("integral: mu must be -1, 1 or 3");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("integral: delta must be >= 0");
    if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("integral: beta must lie in [0,1)");
    if (needs_alpha && !(alpha >= 0.0 && std::isfinite(alpha)))
        throw DomainError("integral: alpha must be >= 0");
    if (mu == -1 && beta == 0.0)
        throw DivergenceError("integral: mu=-1 diverges logarithmically at beta=0");
    if (mu == 3 && delta == 0.0)
        throw DivergenceError("integral: mu=3 diverges logarithmically for a top-hat window");
}

namespace {

struct Piece {
    int j;         // power of z multiplying the trig factor
    double omega;  // frequency
    bool is_sin;
    double coeff;
};

struct PieceTable {
    double prefactor;  // Wt^2 = prefactor * z^(-base) * sum coeff z^j trig(omega z)
    int base;
    std::vector<Piece> pieces;
};

PieceTable pieces_for(double d) {
    if (d == 0.0) {
        // (sin z - z cos z)^2
        return {9.0, 6,
                {{0, 0.0, false, 0.5},
                 {0, 2.0, false, -0.5},
                 {1, 2.0, true, -1.0},
                 {2, 0.0, false, 0.5},
                 {2, 2.0, false, 0.5}}};
    }
    double c = 1.0 + d, s = 2.0 + d;
    double dF = d * F_of(d);
    return {9.0 / (dF * dF), 8,
            {
                // z^2 A^2
                {2, 0.0, false, 0.5 * (1.0 + c * c)},
                {2, 2.0, false, -0.5},
                {2, 2.0 * c, false, -0.5 * c * c},
                {2, d, false, -c},
                {2, s, false, c},
                // 4 z A B
                {1, 2.0, true, 2.0},
                {1, 2.0 * c, true, 2.0 * c},
                {1, s, true, -2.0 * (1.0 + c)},
                {1, d, true, -2.0 * d},
                // 4 B^2
                {0, 0.0, false, 4.0},
                {0, 2.0, false, 2.0},
                {0, 2.0 * c, false, 2.0},
                {0, d, false, -4.0},
                {0, s, false, -4.0},
            }};
}

// int_zc^inf z^-q trig(omega z) dz, q >= 2
double trig_tail(int q, double omega, bool is_sin, double zc) {
    double sgn = 1.0;
    if (omega < 0.0) {
        omega = -omega;
        if (is_sin) sgn = -1.0;
    }
    if (omega == 0.0) return is_sin ? 0.0 : std::pow(zc, 1.0 - q) / (q - 1.0);
    cplx e = std::pow(zc, 1.0 - q) * numeric::expint(q, cplx(0.0, -omega * zc));
    return sgn * (is_sin ? e.imag() : e.real());
}

struct SeriesSum {
    double value;
    bool well_conditioned;
};

// the pieces cancel to O(delta^2) against a 1/delta^2 prefactor; past this
// ratio of sum |piece| to |result| too few digits survive
constexpr double kTailCancellation = 1e6;

// int_zc^inf z^mu Wt^2(z) [sinc(alpha z)] dz from the piece table
SeriesSum tail_integral(const PieceTable& t, int mu, double alpha, double zc) {
    double s = 0.0, mag = 0.0;
    auto add = [&](double v) {
        s += v;
        mag += std::fabs(v);
    };
    for (const Piece& p : t.pieces) {
        int q = t.base - mu - p.j;
        if (alpha == 0.0) {
            add(p.coeff * trig_tail(q, p.omega, p.is_sin, zc));
        } else {
            // trig(omega z) sin(alpha z) / (alpha z)
            double f = p.coeff / (2.0 * alpha);
            if (p.is_sin) {
                add(f * trig_tail(q + 1, p.omega - alpha, false, zc));
                add(-f * trig_tail(q + 1, p.omega + alpha, false, zc));
            } else {
                add(f * trig_tail(q + 1, alpha + p.omega, true, zc));
                add(f * trig_tail(q + 1, alpha - p.omega, true, zc));
            }
        }
    }
    return {t.prefactor * s, mag <= kTailCancellation * std::fabs(s)};
}

// Maclaurin coefficients of Wt^2(z) sinc(alpha z); drop_first removes g_0 first
std::vector<double> series_coefficients(const WindowSpec& w, double alpha, bool drop_first) {
    std::vector<double> g = w.wt2_coefficients();
    if (drop_first) g[0] = 0.0;
    if (alpha == 0.0) return g;
    const std::size_t n = g.size();
    std::vector<double> s(n);
    double a2 = alpha * alpha, t = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = t;
        t *= -a2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
    }
    std::vector<double> h(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j <= k; ++j) h[k] += g[k - j] * s[j];
    return h;
}

// int_lo^hi z^mu sum h_k z^(2k) dz
SeriesSum series_integral(const std::vector<double>& h, int mu, double lo, double hi) {
    double sum = 0.0, biggest = 0.0;
    int small_run = 0;
    bool converged = false;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (h[k] == 0.0) continue;
        int p = 2 * int(k) + mu + 1;
        double term;
        if (p == 0) {
            term = h[k] * std::log(hi / lo);
        } else {
            double top = std::pow(hi, p);
            double bot = (lo == 0.0) ? 0.0 : std::pow(lo, p);
            term = h[k] * (top - bot) / p;
        }
        sum += term;
        biggest = std::max(biggest, std::fabs(term));
        if (std::fabs(term) <= 1e-18 * biggest) {
            if (++small_run >= 2) {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    bool ok = converged && biggest <= 1e5 * std::fabs(sum) + 1e-300;
    if (hi == lo) return {0.0, true};
    return {sum, ok};
}

// int_0^inf z^mu (Wt^2 - [mu==-1] g0) sinc(alpha z) dz, exact for alpha > 2c
SeriesSum multipole(const WindowSpec& w, int mu, double alpha) {
    const auto& g = w.wt2_coefficients();
    double la = std::log(alpha);
    double sum = 0.0;
    int small_run = 0;
    for (std::size_t k = (mu == -1 ? 1 : 0); k < g.size(); ++k) {
        if (g[k] == 0.0) continue;
        int s = 2 * int(k) + mu;  // Mellin exponent: int z^(s-1) sin(alpha z) = Gamma(s) sin(pi s/2)/alpha^s
        double mag = std::exp(std::log(std::fabs(g[k])) + std::lgamma(double(s)) - (s + 1) * la);
        // sin(pi s/2) for odd s
        int r = ((s % 4) + 4) % 4;
        double sn = (r == 1) ? 1.0 : -1.0;
        double term = (g[k] > 0 ? 1.0 : -1.0) * sn * mag;
        sum += term;
        if (std::fabs(term) <= 1e-18 * std::fabs(sum)) {
            if (++small_run >= 2) return {sum, true};
        } else {
            small_run = 0;
        }
    }
    return {sum, false};
}

constexpr double kMultipoleRatio = 3.0;  // use the multipole series for alpha >= 3c
constexpr double kSeriesReach = 10.0;    // (2c + alpha) * hi limit for the Maclaurin part

}  // namespace

IntegralResult integral_K_detailed(const IntegralParams& p) {
    p.validate(false);
    if (p.delta == 0.0) return {integral_K_quadrature(p), Method::Quadrature};
    WindowSpec w(p.delta);
    const double c = 1.0 + p.delta;
    double zc = std::max(p.beta, 1.0 / c);
    SeriesSum lo{0.0, true};
    if (zc > p.beta) lo = series_integral(w.wt2_coefficients(), p.mu, p.beta, zc);
    if (!lo.well_conditioned) return {integral_K_quadrature(p), Method::Quadrature};
    SeriesSum hi = tail_integral(pieces_for(p.delta), p.mu, 0.0, zc);
    if (!hi.well_conditioned) return {integral_K_quadrature(p), Method::Quadrature};
    return {lo.value + hi.value, Method::Split};
}

IntegralResult integral_L_detailed(const IntegralParams& p) {
    p.validate(true);
    if (p.alpha == 0.0) return integral_K_detailed(p);
    if (p.delta == 0.0) return {integral_L_quadrature(p), Method::Quadrature};
    WindowSpec w(p.delta);
    const double c = 1.0 + p.delta;
    const double a = p.alpha;
    if (a >= kMultipoleRatio * c) {
        if ((2.0 * c + a) * p.beta > kSeriesReach) return {integral_L_quadrature(p), Method::Quadrature};
        SeriesSum m = multipole(w, p.mu, a);
        if (!m.well_conditioned) return {integral_L_quadrature(p), Method::Quadrature};
        double v = m.value;
        if (p.mu == -1) {
            // g0 int_beta^inf sin(alpha z)/(alpha z^2) dz
            double x = a * p.beta;
            v += std::sin(x) / x - numeric::cosine_integral(x);
        }
        if (p.beta > 0.0) {
            SeriesSum lo = series_integral(series_coefficients(w, a, p.mu == -1), p.mu, 0.0, p.beta);
            if (!lo.well_conditioned) return {integral_L_quadrature(p), Method::Quadrature};
            v -= lo.value;
        }
        return {v, Method::Multipole};
    }
    double zc = std::max(p.beta, 1.0 / c);
    SeriesSum lo{0.0, true};
    if (zc > p.beta) lo = series_integral(series_coefficients(w, a, false), p.mu, p.beta, zc);
    if (!lo.well_conditioned) return {integral_L_quadrature(p), Method::Quadrature};
    SeriesSum hi = tail_integral(pieces_for(p.delta), p.mu, a, zc);
    if (!hi.well_conditioned) return {integral_L_quadrature(p), Method::Quadrature};
    return {lo.value + hi.value, Method::Split};
}

double integral_K(const IntegralParams& p) { return integral_K_detailed(p).value; }
double integral_L(const IntegralParams& p) { return integral_L_detailed(p).value; }

namespace {

double quadrature_common(const IntegralParams& p, double alpha, const numeric::QuadratureSpec& spec) {
    const double d = p.delta;
    const double c = 1.0 + d;
    std::optional<WindowSpec> w;
    if (d > 0.0) w.emplace(d);
    auto f = [&](double z) {
        double wt = w ? window_fourier(z, *w) : window_fourier_tophat(z);
        double v = wt * wt;
        if (p.mu == 1) v *= z;
        else if (p.mu == 3) v *= z * z * z;
        else v /= z;
        if (alpha > 0.0) {
            double x = alpha * z;
            v *= (x < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        }
        return v;
    };
    // panel boundaries: geometric near a small lower limit, then about one
    // oscillation per panel up to zmax
    // for tiny delta the exact tail only resolves once delta * zmax is not small
    const PieceTable table = pieces_for(d);
    double zmax = 40.0;
    while (zmax < 1e5 && !tail_integral(table, p.mu, alpha, zmax).well_conditioned) zmax *= 2.0;
    const double z1 = 1.0 / c;
    std::vector<double> cuts;
    double lo = p.beta;
    cuts.push_back(lo);
    if (lo < z1) {
        if (lo > 0.0) {
            double x = lo;
            while (x * 2.0 < z1) {
                x *= 2.0;
                cuts.push_back(x);
            }
        }
        cuts.push_back(z1);
    }
    double width = std::min(1.0, 2.0 * numeric::pi / (2.0 * c + alpha));
    double start = cuts.back();
    int n = std::max(1, int(std::ceil((zmax - start) / width)));
    for (int i = 1; i <= n; ++i) cuts.push_back(start + (zmax - start) * i / n);

    // crude pass for the absolute scale
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        numeric::QuadratureSpec loose;
        loose.rel_tol = 1.0;
        loose.abs_tol = 1e300;
        scale += std::fabs(numeric::integrate(f, cuts[i], cuts[i + 1], loose).value);
    }
    numeric::QuadratureSpec s = spec;
    s.abs_tol = std::max(spec.abs_tol, 0.05 * spec.rel_tol * scale / double(cuts.size()));
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += numeric::integrate(f, cuts[i], cuts[i + 1], s).value;
    total += tail_integral(table, p.mu, alpha, zmax).value;
    return total;
}

}  // namespace

double integral_K_quadrature(const IntegralParams& p, const numeric::QuadratureSpec& spec) {
    p.validate(false);
    return quadrature_common(p, 0.0, spec);
}

double integral_L_quadrature(const IntegralParams& p, const numeric::QuadratureSpec& spec) {
    p.validate(true);
    return quadrature_common(p, p.alpha, spec);
}

}  // namespace bellfield::window
