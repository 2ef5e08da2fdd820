#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "bellfield/cli.hpp"
#include "bellfield/errors.hpp"
#include "bellfield/gkmr.hpp"
#include "bellfield/larsson.hpp"
#include "bellfield/window.hpp"

namespace bellfield::cli {

namespace {

using model::Background;
using model::CovarianceMatrix;
using model::SceneParams;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Check check(const std::string& name, double measured, double tol, const std::string& detail = "") {
    return {name, std::isfinite(measured) && measured <= tol, measured, tol, detail};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_entry_rel(const CovarianceMatrix& a, const CovarianceMatrix& b, double floor) {
    const double va[6] = {a.g11, a.g12, a.g22, a.g13, a.g14, a.g24};
    const double vb[6] = {b.g11, b.g12, b.g22, b.g13, b.g14, b.g24};
    double m = 0.0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(va[i] - vb[i]) / std::max(std::abs(vb[i]), floor));
    return m;
}

void kl_checks(Report& r, bool fast) {
    std::vector<double> as = {2.5, 3.0, 4.0, 6.0, 8.0}, bs = {1e-4, 1e-3, 1e-2, 0.1, 0.5},
                        ds = {0.01, 0.03, 0.1, 0.3, 1.0};
    if (fast) {
        as = {2.5, 4.0, 8.0};
        bs = {1e-4, 1e-2, 0.5};
        ds = {0.01, 0.1, 1.0};
    }
    double worst_k = 0.0, worst_l = 0.0;
    std::string where_k, where_l;
    for (double d : ds)
        for (double b : bs) {
            for (int mu : {-1, 1, 3}) {
                window::IntegralParams p{mu, 0.0, b, d};
                double e = rel(window::integral_K(p), window::integral_K_quadrature(p));
                if (e > worst_k) {
                    worst_k = e;
                    where_k = "mu=" + std::to_string(mu) + " beta=" + num(b) + " delta=" + num(d);
                }
            }
            for (double a0 : as) {
                double a = std::max(a0, 2.0 * (1.0 + d));
                for (int mu : {-1, 1, 3}) {
                    window::IntegralParams p{mu, a, b, d};
                    double e = rel(window::integral_L(p), window::integral_L_quadrature(p));
                    if (e > worst_l) {
                        worst_l = e;
                        where_l = "mu=" + std::to_string(mu) + " alpha=" + num(a) + " beta=" + num(b) +
                                  " delta=" + num(d);
                    }
                }
            }
        }
    r.checks.push_back(check("kl.K_analytic_vs_quadrature", worst_k, 1e-8, "worst at " + where_k));
    r.checks.push_back(check("kl.L_analytic_vs_quadrature", worst_l, 1e-8, "worst at " + where_l));
}

void special_checks(Report& r) {
    double e = std::max({rel(numeric::cosine_integral(1.0), 0.33740392290096813466),
                         rel(numeric::cosine_integral(20.0), 0.044419820845353316541),
                         rel(numeric::sine_integral(3.0), 1.8486525279994681249)});
    r.checks.push_back(check("special.Ci_Si_reference", e, 1e-12));
    numeric::cplx z = numeric::erf_complex({1.0, 1.0});
    double ez = std::abs(z - numeric::cplx(1.3161512816979476448, 0.19045346923783471861)) / std::abs(z);
    numeric::cplx w = numeric::erf_complex({0.0, 1.0});
    ez = std::max(ez, std::abs(w - numeric::cplx(0.0, 1.6504257587975428760)) / std::abs(w));
    r.checks.push_back(check("special.erf_complex_reference", ez, 1e-12));
}

SceneParams random_point(numeric::CounterRng& rng, int i) {
    SceneParams s;
    s.background = i % 2 == 0 ? Background::Minkowski : Background::DeSitter;
    s.delta = std::exp(std::log(0.01) + rng.uniform() * std::log(100.0));
    s.alpha = s.alpha_min() + 6.0 * rng.uniform();
    s.beta = std::exp(std::log(1e-4) + rng.uniform() * std::log(1e3));
    s.HR = s.background == Background::DeSitter ? std::exp(std::log(1e-2) + rng.uniform() * std::log(1e4)) : 0.0;
    return s;
}

std::string describe(const SceneParams& s) {
    std::string d = std::string(model::background_name(s.background)) + " alpha=" + num(s.alpha) +
                    " beta=" + num(s.beta) + " delta=" + num(s.delta);
    if (s.background == Background::DeSitter) d += " HR=" + num(s.HR);
    return d;
}

void invariant_checks(Report& r, const std::string& tag, const CovarianceMatrix& g) {
    double p = model::purity(g);
    r.checks.push_back(check(tag + ".purity_in_unit_interval", (p > 0.0 && p <= 1.0) ? 0.0 : 1.0, 0.0, num(p)));
    double dg = model::det(g);
    r.checks.push_back(check(tag + ".det_gamma_bound", std::max(0.0, 1.0 / 16.0 - dg), 1e-9, num(dg)));
    // det(gamma^-1) = det((gamma^-1)^{pi pi}) det(a)
    model::InverseBlocks ib = model::inverse_blocks(g);
    model::ReducedA a = model::reduced_a(g);
    r.checks.push_back(check(tag + ".schur_determinant", rel(linalg::det(ib.pp) * a.det(), 1.0 / dg), 1e-10));
    gkmr::CorrelatorSet c = gkmr::bell(g);
    double out = std::max({std::abs(c.sxsx), std::abs(c.szsz), std::abs(c.sxsz)}) - 1.0;
    r.checks.push_back(check(tag + ".correlators_bounded", std::max(0.0, out), 0.0));
}

void mc_checks(Report& r, const ValidateOptions& opt) {
    const int points = opt.fast ? 5 : 20;
    const int samples = opt.fast ? 100000 : 1000000;
    const double h = 0.05;
    numeric::CounterRng rng(opt.seed, 99);
    for (int i = 0; i < points; ++i) {
        SceneParams s = random_point(rng, i);
        CovarianceMatrix g = model::build_covariance(s);
        char tag[32];
        std::snprintf(tag, sizeof tag, "mc.point%02d", i);
        invariant_checks(r, tag, g);
        CovarianceMatrix closed = g;
        closed.g13 += opt.perturb_gamma;
        gkmr::McCorrelators mc = gkmr::mc_correlators(g, samples, opt.seed + 1000 + i, h);
        CovarianceMatrix smoothed = closed;
        smoothed.g11 += h * h;
        smoothed.g22 += h * h;
        double sx, sz;
        try {
            sx = gkmr::sxsx(closed);
            sz = gkmr::szsz(smoothed);
        } catch (const Error& e) {
            r.checks.push_back({std::string(tag) + ".sxsx", false, NAN, 3.0, e.what()});
            continue;
        }
        std::string d = describe(s);
        r.checks.push_back(check(std::string(tag) + ".sxsx", std::abs(mc.sxsx.mean - sx) / mc.sxsx.std_error, 3.0,
                                 "sigmas; closed=" + num(sx) + " mc=" + num(mc.sxsx.mean) + "; " + d));
        r.checks.push_back(check(std::string(tag) + ".szsz",
                                 std::abs(mc.szsz_smoothed.mean - sz) / mc.szsz_smoothed.std_error, 3.0,
                                 "sigmas; closed=" + num(sz) + " mc=" + num(mc.szsz_smoothed.mean) + "; " + d));
        r.checks.push_back(check(std::string(tag) + ".sxsz", std::abs(mc.sxsz.mean) / mc.sxsz.std_error, 3.0,
                                 "sigmas; mc=" + num(mc.sxsz.mean)));
    }
    CovarianceMatrix g = model::build_covariance({Background::Minkowski, 0.0, 3.0, 0.0, 0.1});
    CovarianceMatrix tiny = g;
    tiny.g11 += 1e-8;
    tiny.g22 += 1e-8;
    r.checks.push_back(check("mc.szsz_smoothing_limit", rel(gkmr::szsz(tiny), gkmr::szsz(g)), 1e-6));
    r.checks.push_back(check("gkmr.wigner_origin", rel(gkmr::szsz_from_wigner_origin(g), gkmr::szsz(g)), 1e-12));
}

void chsh_check(Report& r) {
    CovarianceMatrix g = model::build_covariance({Background::Minkowski, 0.0, 3.0, 0.0, 0.1});
    gkmr::CorrelatorSet c = gkmr::bell(g);
    gkmr::ChshMax m = gkmr::chsh_maximize({c.szsz, c.sxsz, c.sxsz, c.sxsx});
    r.checks.push_back(check("gkmr.chsh_maximum", rel(m.value, c.bell), 1e-9));
}

void larsson_checks(Report& r, const ValidateOptions& opt) {
    CovarianceMatrix g = model::build_covariance({Background::Minkowski, 0.0, 3.0, 0.0, 0.1});
    larsson::LarssonConfig cfg;
    cfg.ell = 1e-2;
    larsson::LarssonSet small = larsson::bell_larsson(g, cfg);
    r.checks.push_back(check("larsson.small_ell_bell", std::abs(small.correlators.bell - 2.0), 1e-2));
    r.checks.push_back(check("larsson.small_ell_sxsx",
                             std::abs(small.correlators.sxsx - larsson::small_ell_sxsx(g, 1e-2)), 1e-2));
    cfg.ell = 1e2;
    r.checks.push_back(check("larsson.large_ell_szsz",
                             std::abs(larsson::szsz_larsson(g, cfg).value - gkmr::sxsx(g)), 1e-2));
    cfg.ell = 1.0;
    int samples = opt.fast ? 100000 : 1000000;
    larsson::McLarsson mc = larsson::mc_larsson(g, 1.0, samples, opt.seed + 7);
    CovarianceMatrix closed = g;
    closed.g13 += opt.perturb_gamma;
    double sx = larsson::sxsx_larsson(closed, cfg).value, sz = larsson::szsz_larsson(closed, cfg).value;
    r.checks.push_back(check("larsson.mc_sxsx", std::abs(mc.sxsx.mean - sx) / mc.sxsx.std_error, 3.0,
                             "sigmas; sum=" + num(sx) + " mc=" + num(mc.sxsx.mean)));
    r.checks.push_back(check("larsson.mc_szsz", std::abs(mc.szsz.mean - sz) / mc.szsz.std_error, 3.0,
                             "sigmas; sum=" + num(sz) + " mc=" + num(mc.szsz.mean)));
}

void model_checks(Report& r) {
    SceneParams ds{Background::DeSitter, 1e-6, 3.0, 1e-4, 1e-2};
    SceneParams mk = ds;
    mk.background = Background::Minkowski;
    CovarianceMatrix a = model::build_covariance(ds), b = model::build_covariance(mk);
    // entries that vanish in flat space are measured against the diagonal scale
    r.checks.push_back(check("model.desitter_small_HR_reduction", max_entry_rel(a, b, std::sqrt(b.g11 * b.g22)), 1e-6));
    for (Background bg : {Background::Minkowski, Background::DeSitter}) {
        SceneParams s{bg, 0.5, 3.0, 1e-3, 0.1};
        CovarianceMatrix fast = model::build_covariance(s);
        model::PowerSpectra p = bg == Background::Minkowski ? model::minkowski_spectra() : model::desitter_spectra(s.HR);
        CovarianceMatrix slow = model::covariance_from_spectra(p, s);
        r.checks.push_back(check(std::string("model.covariance_oracle_") + model::background_name(bg),
                                 max_entry_rel(fast, slow, 1e-3), 1e-6));
    }
}

}  // namespace

bool Report::all_passed() const {
    for (const Check& c : checks)
        if (!c.passed) return false;
    return true;
}

Report validate(const ValidateOptions& opt) {
    Report r;
    special_checks(r);
    kl_checks(r, opt.fast);
    model_checks(r);
    chsh_check(r);
    mc_checks(r, opt);
    larsson_checks(r, opt);
    return r;
}

void write_report(std::ostream& out, const Report& r) {
    int failed = 0;
    for (const Check& c : r.checks) {
        if (!c.passed) ++failed;
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << num(c.measured)
            << " tolerance=" << num(c.tolerance);
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
    }
    out << (failed == 0 ? "all " + std::to_string(r.checks.size()) + " checks passed"
                        : std::to_string(failed) + " of " + std::to_string(r.checks.size()) + " checks failed")
        << "\n";
}

}  // namespace bellfield::cli
