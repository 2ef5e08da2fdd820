#include "bellfield/model.hpp"

#include <cmath>
#include <optional>

#include "bellfield/errors.hpp"

namespace bellfield::model {

using numeric::pi;

const char* background_name(Background b) {
    return b == Background::Minkowski ? "minkowski" : "desitter";
}

void SceneParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("scene: delta must be positive");
    if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("scene: beta must lie in [0,1)");
    // a few ulps of slack so that alpha = alpha_min computed elsewhere is accepted
    if (!(alpha >= alpha_min() * (1.0 - 1e-14)) || !std::isfinite(alpha))
        throw DomainError("scene: alpha must be >= 2(1+delta) so the patches do not overlap");
    if (background == Background::DeSitter && !(HR > 0.0 && std::isfinite(HR)))
        throw DomainError("scene: de Sitter needs HR > 0");
}

PowerSpectra minkowski_spectra() {
    return {[](double z) { return z * z; }, [](double) { return 0.0; },
            [](double z) { return z * z * z * z; }};
}

PowerSpectra desitter_spectra(double HR) {
    if (!(HR > 0.0)) throw DomainError("desitter_spectra: HR must be positive");
    // k eta = -z/HR in the Bunch-Davies spectra
    return {[HR](double z) { return HR * HR + z * z; }, [HR](double z) { return -HR * z * z; },
            [](double z) { return z * z * z * z; }};
}

linalg::Mat4 CovarianceMatrix::full() const {
    return {{{g11, g12, g13, g14}, {g12, g22, g14, g24}, {g13, g14, g11, g12}, {g14, g24, g12, g22}}};
}

CovarianceMatrix CovarianceMatrix::from_full(const linalg::Mat4& m) {
    return {m[0][0], m[0][1], m[1][1], m[0][2], m[0][3], m[1][3]};
}

CovarianceMatrix build_covariance(const SceneParams& s) {
    s.validate();
    const double norm = 1.0 / (3.0 * pi * window::G_of(s.delta));
    auto K = [&](int mu) { return window::integral_K({mu, 0.0, s.beta, s.delta}); };
    auto L = [&](int mu) { return window::integral_L({mu, s.alpha, s.beta, s.delta}); };
    double K1 = K(1), K3 = K(3), L1 = L(1), L3 = L(3);
    CovarianceMatrix g;
    g.g22 = norm * K3;
    g.g24 = norm * L3;
    if (s.background == Background::Minkowski) {
        g.g11 = norm * K1;
        g.g13 = norm * L1;
        g.g12 = 0.0;
        g.g14 = 0.0;
    } else {
        double h2 = s.HR * s.HR;
        g.g11 = norm * (h2 * K(-1) + K1);
        g.g13 = norm * (h2 * L(-1) + L1);
        g.g12 = -norm * s.HR * K1;
        g.g14 = -norm * s.HR * L1;
    }
    return g;
}

CovarianceMatrix covariance_from_spectra(const PowerSpectra& p, const SceneParams& s,
                                         const numeric::QuadratureSpec& spec) {
    s.validate();
    window::WindowSpec w(s.delta);
    const double c = 1.0 + s.delta;
    const double norm = 1.0 / (3.0 * pi * w.G());
    const double zmax = 2000.0;
    auto entry = [&](const std::function<double(double)>& pk, bool cross) {
        auto f = [&](double z) {
            double wt = window::window_fourier(z, w);
            double v = wt * wt * pk(z) / z;
            if (cross) {
                double x = s.alpha * z;
                v *= std::sin(x) / x;
            }
            return v;
        };
        double lo = s.beta;
        double total = 0.0;
        const double x = 1.0 / c;
        if (lo < x) {
            // geometric panels towards a small lower limit
            double a = lo;
            double b = (lo == 0.0) ? x : std::min(x, 2.0 * lo);
            while (true) {
                total += numeric::integrate(f, a, b, spec).value;
                if (b >= x) break;
                a = b;
                b = std::min(x, 2.0 * b);
            }
            lo = x;
        }
        double width = std::min(1.0, 2.0 * pi / (2.0 * c + (cross ? s.alpha : 0.0)));
        int n = int(std::ceil((zmax - lo) / width));
        numeric::QuadratureSpec ps = spec;
        ps.abs_tol = std::max(spec.abs_tol, 1e-18);
        total += numeric::integrate_panels(f, lo, zmax, n, ps).value;
        double pz = pk(zmax);
        if (!cross && pz != 0.0) {
            // averaged over the fast frequencies, Wt^2 ~ 9 [(1+c^2)/2 - c cos(delta z)] / ((delta F)^2 z^6);
            // the spectrum is a power law z^k out here
            double k = std::round(std::log2(pk(2.0 * zmax) / pz));
            double df = s.delta * w.F();
            double amp = 9.0 / (df * df) * pz / std::pow(zmax, k);
            int q = int(7.0 - k);
            double zq = std::pow(zmax, 1.0 - q);
            double flat = 0.5 * (1.0 + c * c) * zq / (q - 1.0);
            double beat = c * zq * numeric::expint(q, numeric::cplx(0.0, -s.delta * zmax)).real();
            total += amp * (flat - beat);
        }
        return norm * total;
    };
    CovarianceMatrix g;
    g.g11 = entry(p.p_phiphi, false);
    g.g12 = entry(p.p_phipi, false);
    g.g22 = entry(p.p_pipi, false);
    g.g13 = entry(p.p_phiphi, true);
    g.g14 = entry(p.p_phipi, true);
    g.g24 = entry(p.p_pipi, true);
    return g;
}

double det(const CovarianceMatrix& g) { return linalg::det(g.full()); }

double purity(const CovarianceMatrix& g) {
    double d = det(g);
    if (d < 1.0 / 16.0 - 1e-9)
        throw UnphysicalStateError("purity: det(gamma) < 1/16 violates the uncertainty bound", d);
    return 1.0 / (4.0 * std::sqrt(std::max(d, 1.0 / 16.0)));
}

InverseBlocks inverse_blocks(const CovarianceMatrix& g) {
    linalg::Mat4 m = g.full();
    double cond = linalg::condition_number(m);
    if (!(cond <= kMaxCondition))
        throw ConditioningError("covariance inversion is ill-conditioned", cond);
    linalg::Mat4 inv = linalg::inverse(m);
    // field-first ordering (phi1, phi2, pi1, pi2) <- (0, 2, 1, 3)
    constexpr int perm[4] = {0, 2, 1, 3};
    linalg::Mat4 p{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p[i][j] = inv[perm[i]][perm[j]];
    InverseBlocks b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            b.ff[i][j] = p[i][j];
            b.fp[i][j] = p[i][j + 2];
            b.pp[i][j] = p[i + 2][j + 2];
        }
    return b;
}

ReducedA reduced_a(const CovarianceMatrix& g) {
    InverseBlocks b = inverse_blocks(g);
    linalg::Mat2 ppi = linalg::inverse(b.pp);
    linalg::Mat2 a{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = b.ff[i][j];
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) s -= b.fp[i][k] * ppi[k][l] * b.fp[j][l];
            a[i][j] = s;
        }
    return {a[0][0], 0.5 * (a[0][1] + a[1][0]), a[1][1]};
}

}  // namespace bellfield::model
