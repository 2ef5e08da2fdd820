// Larsson correlators as double sums over field bins. Integrating out the
// momenta and the second field value leaves, per pair of bins, a 1-D integral of
// a Gaussian times a difference of (complex) error functions.
#include "bellfield/larsson.hpp"

#include <cmath>
#include <string>

#include "bellfield/errors.hpp"

namespace bellfield::larsson {

using numeric::cplx;
using numeric::pi;

void LarssonConfig::validate() const {
    if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("larsson: ell must be positive");
    if (!(tail_tol > 0.0)) throw DomainError("larsson: tail_tol must be positive");
    if (max_shell < 1) throw DomainError("larsson: max_shell must be >= 1");
    quad.validate();
}

namespace {

constexpr double kClip = 8.5;       // Gaussian widths kept on either side
constexpr int kGaussOrder = 10;
constexpr double kNegligibleDamping = 46.0;  // exp(-46) ~ 1e-20

struct Geometry {
    model::ReducedA a;
    linalg::Mat2 S;  // [(gamma^-1)^{pi pi}]^-1, conditional momentum covariance
    linalg::Mat2 P;  // (gamma^-1)^{phi pi}
};

Geometry geometry(const model::CovarianceMatrix& g) {
    model::InverseBlocks b = model::inverse_blocks(g);
    Geometry geo;
    geo.a = model::reduced_a(g);
    geo.S = linalg::inverse(b.pp);
    geo.P = b.fp;
    return geo;
}

void check_a(const model::ReducedA& a) {
    if (!(a.a11 > 0.0 && a.a22 > 0.0 && a.det() > 0.0))
        throw MatrixError("larsson: reduced matrix a is not positive definite");
}

double sigma1(const model::ReducedA& a) { return std::sqrt(a.a22 / a.det()); }
double sigma2(const model::ReducedA& a) { return std::sqrt(a.a11 / a.det()); }

// exp(-y^2) erfc(z) for Re z >= 0
cplx erfc_scaled(cplx z) {
    double x = z.real(), y = z.imag();
    return std::exp(cplx(-x * x, -2.0 * x * y)) * numeric::faddeeva(cplx(-y, x));
}

// exp(-y^2) [erf(x_hi + i y) - erf(x_lo + i y)] without cancellation in the tails
cplx erf_difference(double x_lo, double x_hi, double y) {
    if (y == 0.0) {
        if (x_lo >= 0.0) return std::erfc(x_lo) - std::erfc(x_hi);
        if (x_hi <= 0.0) return std::erfc(-x_hi) - std::erfc(-x_lo);
        return std::erf(x_hi) - std::erf(x_lo);
    }
    cplx lo(x_lo, y), hi(x_hi, y);
    if (x_lo >= 0.0) return erfc_scaled(lo) - erfc_scaled(hi);
    if (x_hi <= 0.0) return erfc_scaled(-hi) - erfc_scaled(-lo);
    return numeric::erf_complex_scaled(hi) - numeric::erf_complex_scaled(lo);
}

// int_{lo1}^{hi1} dphi1 int_{lo2}^{hi2} dphi2 exp(-phi.a.phi/2 + i v.phi) exp(-v2^2/(2 a22))
// (the last factor is carried by the scaled error functions)
cplx bin_integral(const model::ReducedA& a, double lo1, double hi1, double lo2, double hi2, double v1,
                  double v2) {
    const double s = a.a11 - a.a12 * a.a12 / a.a22;
    const double sig1 = 1.0 / std::sqrt(s);
    const double lo = std::max(lo1, -kClip * sig1), hi = std::min(hi1, kClip * sig1);
    if (!(lo < hi)) return 0.0;
    // phi2 given phi1 is centred on -a12 phi1 / a22 with width 1/sqrt(a22)
    const double c = -a.a12 / a.a22;
    const double w2 = kClip / std::sqrt(a.a22);
    if (lo2 > std::max(c * lo, c * hi) + w2 || hi2 < std::min(c * lo, c * hi) - w2) return 0.0;

    const double r = std::sqrt(2.0 * a.a22);
    const double kappa = v1 - v2 * a.a12 / a.a22;
    const double y = -v2 / r;
    double width = sig1;
    if (a.a12 != 0.0) width = std::min(width, r / std::fabs(a.a12));
    if (kappa != 0.0) width = std::min(width, 2.0 / std::fabs(kappa));
    const int pieces = std::max(1, int(std::ceil((hi - lo) / width)));
    const numeric::GaussRule& rule = numeric::gauss_legendre(kGaussOrder);
    const double h = (hi - lo) / pieces;
    cplx sum = 0.0;
    for (int p = 0; p < pieces; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double phi = mid + 0.5 * h * rule.nodes[k];
            const double x_lo = (a.a22 * lo2 + a.a12 * phi) / r;
            const double x_hi = (a.a22 * hi2 + a.a12 * phi) / r;
            cplx e = (kappa == 0.0) ? cplx(std::exp(-0.5 * s * phi * phi))
                                    : std::exp(cplx(-0.5 * s * phi * phi, kappa * phi));
            sum += rule.weights[k] * e * erf_difference(x_lo, x_hi, y);
        }
    }
    return std::sqrt(pi / (2.0 * a.a22)) * 0.5 * h * sum;
}

// S_x bins [l/2 + 2 n l, 3 l/2 + 2 n l]
double x_lo_edge(int n, double ell) { return 0.5 * ell + 2.0 * n * ell; }

struct Epsilon {
    double v1, v2;   // l u with u = -P S eps
    double damping;  // exp(-l^2 eps.S.eps / 2)
    bool negligible;
};

Epsilon epsilon_data(const Geometry& geo, double ell, int e1, int e2) {
    const double se1 = geo.S[0][0] * e1 + geo.S[0][1] * e2;
    const double se2 = geo.S[1][0] * e1 + geo.S[1][1] * e2;
    const double q = 0.5 * ell * ell * (e1 * se1 + e2 * se2);
    Epsilon ep;
    ep.v1 = -ell * (geo.P[0][0] * se1 + geo.P[0][1] * se2);
    ep.v2 = -ell * (geo.P[1][0] * se1 + geo.P[1][1] * se2);
    ep.damping = std::exp(-q);
    ep.negligible = q > kNegligibleDamping;
    return ep;
}

cplx x_bin(const Geometry& geo, const Epsilon& ep, int n, int m, double ell) {
    if (ep.negligible) return 0.0;
    double lo1 = x_lo_edge(n, ell), lo2 = x_lo_edge(m, ell);
    return ep.damping * bin_integral(geo.a, lo1, lo1 + ell, lo2, lo2 + ell, ep.v1, ep.v2);
}

double prefactor(const model::ReducedA& a) { return std::sqrt(a.det()) / (2.0 * pi); }

SumResult run_sum(const std::function<double(int, int)>& term, const model::ReducedA& a,
                  const LarssonConfig& cfg, const char* what) {
    SumResult r;
    int n0 = initial_shell(a, cfg.ell);
    try {
        numeric::DoubleSumResult d = numeric::truncated_double_sum(term, cfg.tail_tol, cfg.max_shell, n0);
        r.value = d.value;
        r.shells = d.shells;
        r.tail = d.last_shell;
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(what) + ": no convergence at ell=" + std::to_string(cfg.ell) +
                                   " within " + std::to_string(cfg.max_shell) + " shells",
                               e.estimate, e.error_bound);
    }
    return r;
}

}  // namespace

LarssonAuxiliary auxiliary(const model::CovarianceMatrix& g, int e1, int e2) {
    Geometry geo = geometry(g);
    const double se1 = geo.S[0][0] * e1 + geo.S[0][1] * e2;
    const double se2 = geo.S[1][0] * e1 + geo.S[1][1] * e2;
    return {0.5 * (geo.P[0][0] * se1 + geo.P[0][1] * se2), 0.5 * (geo.P[1][0] * se1 + geo.P[1][1] * se2)};
}

double z_term(int n, int m, const model::ReducedA& a, const LarssonConfig& cfg) {
    cfg.validate();
    check_a(a);
    const double l = cfg.ell;
    return bin_integral(a, n * l, (n + 1) * l, m * l, (m + 1) * l, 0.0, 0.0).real();
}

cplx x_term_epsilon(int n, int m, const model::CovarianceMatrix& g, const LarssonConfig& cfg, int e1,
                    int e2) {
    cfg.validate();
    if (std::abs(e1) != 1 || std::abs(e2) != 1) throw DomainError("x_term: eps entries must be +-1");
    Geometry geo = geometry(g);
    check_a(geo.a);
    return x_bin(geo, epsilon_data(geo, cfg.ell, e1, e2), n, m, cfg.ell);
}

double x_term(int n, int m, const model::CovarianceMatrix& g, const LarssonConfig& cfg) {
    cfg.validate();
    Geometry geo = geometry(g);
    check_a(geo.a);
    cplx s = 0.0;
    for (int e1 : {-1, 1})
        for (int e2 : {-1, 1}) s += x_bin(geo, epsilon_data(geo, cfg.ell, e1, e2), n, m, cfg.ell);
    if (std::fabs(s.imag()) > 1e-9 * std::max(std::fabs(s.real()), 1e-300) && std::fabs(s.imag()) > 1e-300)
        throw Error("x_term: imaginary residue " + std::to_string(s.imag()) + " after the sign sum");
    return s.real();
}

int initial_shell(const model::ReducedA& a, double ell) {
    check_a(a);
    double sig = std::max(sigma1(a), sigma2(a));
    double n = std::ceil(6.0 * sig / ell) + 2.0;
    return n > 1e9 ? 1000000000 : int(n);
}

double min_reachable_ell(const model::ReducedA& a, int max_shell) {
    check_a(a);
    if (max_shell <= 2) return std::numeric_limits<double>::infinity();
    return 6.0 * std::max(sigma1(a), sigma2(a)) / double(max_shell - 2);
}

SumResult szsz_larsson(const model::CovarianceMatrix& g, const LarssonConfig& cfg) {
    cfg.validate();
    model::ReducedA a = model::reduced_a(g);
    check_a(a);
    if (initial_shell(a, cfg.ell) > cfg.max_shell) {
        SumResult r;
        r.value = small_ell_szsz(a, cfg.ell);
        r.approx = true;
        return r;
    }
    const double pf = prefactor(a), l = cfg.ell;
    auto term = [&](int n, int m) {
        double z = bin_integral(a, n * l, (n + 1) * l, m * l, (m + 1) * l, 0.0, 0.0).real();
        return ((n + m) % 2 == 0 ? pf : -pf) * z;
    };
    return run_sum(term, a, cfg, "szsz_larsson");
}

SumResult sxsx_larsson(const model::CovarianceMatrix& g, const LarssonConfig& cfg) {
    cfg.validate();
    Geometry geo = geometry(g);
    check_a(geo.a);
    if (initial_shell(geo.a, cfg.ell) > cfg.max_shell) {
        SumResult r;
        r.value = small_ell_sxsx(g, cfg.ell);
        r.approx = true;
        return r;
    }
    // eps and -eps give complex conjugates, so two sign vectors and twice the real part
    const Epsilon pp = epsilon_data(geo, cfg.ell, 1, 1);
    const Epsilon pm = epsilon_data(geo, cfg.ell, 1, -1);
    const double pf = 2.0 * prefactor(geo.a);
    auto term = [&](int n, int m) {
        return pf * (x_bin(geo, pp, n, m, cfg.ell) + x_bin(geo, pm, n, m, cfg.ell)).real();
    };
    return run_sum(term, geo.a, cfg, "sxsx_larsson");
}

double sxsz_larsson() { return 0.0; }

LarssonSet bell_larsson(const model::CovarianceMatrix& g, const LarssonConfig& cfg) {
    SumResult x = sxsx_larsson(g, cfg);
    SumResult z = szsz_larsson(g, cfg);
    LarssonSet out;
    out.correlators.sxsx = x.value;
    out.correlators.szsz = z.value;
    out.correlators.sxsz = sxsz_larsson();
    out.correlators.bell = 2.0 * std::hypot(x.value, z.value);
    out.correlators.purity = model::purity(g);
    out.shells = std::max(x.shells, z.shells);
    out.tail = std::max(x.tail, z.tail);
    out.approx = x.approx || z.approx;
    return out;
}

double small_ell_sxsx(const model::CovarianceMatrix& g, double ell) {
    if (!(ell >= 0.0)) throw DomainError("small_ell_sxsx: ell must be >= 0");
    double l2 = ell * ell;
    return 0.5 * (std::exp(-l2 * (g.g22 + g.g24)) + std::exp(-l2 * (g.g22 - g.g24)));
}

double small_ell_szsz(const model::ReducedA& a, double ell) {
    if (!(ell >= 0.0)) throw DomainError("small_ell_szsz: ell must be >= 0");
    check_a(a);
    if (ell == 0.0) return 0.0;
    const double d = a.det();
    const double var_minus = (a.a11 + a.a22 + 2.0 * a.a12) / d;  // Var(phi1 - phi2)
    const double var_plus = (a.a11 + a.a22 - 2.0 * a.a12) / d;   // Var(phi1 + phi2)
    const double w2 = pi * pi / (ell * ell);
    return 8.0 / (pi * pi) * (std::exp(-0.5 * w2 * var_minus) - std::exp(-0.5 * w2 * var_plus));
}

McLarsson mc_larsson(const model::CovarianceMatrix& g, double ell, int n_samples, std::uint64_t seed) {
    if (!(ell > 0.0)) throw DomainError("mc_larsson: ell must be positive");
    const double norm = 1.0 / (4.0 * pi * pi);
    auto parity = [ell](double phi) { return (long long)std::floor(phi / ell) % 2 == 0 ? 1.0 : -1.0; };
    auto in_x = [ell](double phi) { return (long long)std::floor((phi - 0.5 * ell) / ell) % 2 == 0; };
    // q = (phi1, pi1, phi2, pi2)
    std::vector<numeric::PhaseFunction> fs = {
        [&](const numeric::PhasePoint& q) {
            if (!in_x(q[0]) || !in_x(q[2])) return 0.0;
            return norm * 4.0 * std::cos(ell * q[1]) * std::cos(ell * q[3]);
        },
        [&](const numeric::PhasePoint& q) { return norm * parity(q[0]) * parity(q[2]); },
    };
    auto r = numeric::gaussian_mc_expectations(g.full(), fs, n_samples, seed);
    return {r[0], r[1]};
}

}  // namespace bellfield::larsson
