#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bellfield/cli.hpp"
#include "bellfield/errors.hpp"
#include "bellfield/gkmr.hpp"
#include "bellfield/larsson.hpp"
#include "bellfield/svg.hpp"

namespace bellfield::cli {

using nlohmann::json;

namespace {

const char* kBlue = "#1f77b4";
const char* kOrange = "#ff7f0e";
const char* kGreen = "#2ca02c";
const char* kRed = "#d62728";
const std::vector<std::string> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf"};

struct Overlay {
    std::string name;
    std::vector<double> x, y;
};

struct Figure {
    std::string id;
    std::vector<SweepSpec> sweeps;
    std::vector<std::vector<ResultRow>> results;
    std::vector<Overlay> overlays;
    std::string svg;
};

GridAxis axis(const std::string& name, double min, double max, int count, bool log = true) {
    GridAxis a;
    a.name = name;
    a.min = min;
    a.max = max;
    a.count = count;
    a.log = log;
    return a;
}

SweepSpec spec(model::Background bg, Family fam, std::vector<GridAxis> axes, std::map<std::string, double> fixed,
               int threads) {
    SweepSpec s;
    s.background = bg;
    s.family = fam;
    s.axes = std::move(axes);
    s.fixed = std::move(fixed);
    s.threads = threads;
    return s;
}

void run(Figure& f) {
    for (const SweepSpec& s : f.sweeps) f.results.push_back(run_sweep(s));
}

std::vector<double> column(const std::vector<ResultRow>& rows, double ResultRow::*field) {
    std::vector<double> v;
    for (const ResultRow& r : rows) v.push_back(r.*field);
    return v;
}

svg::Series series(const std::string& label, std::vector<double> x, std::vector<double> y, const std::string& color,
                   const std::string& dash = "") {
    return {label, std::move(x), std::move(y), color, dash};
}

std::vector<double> round_levels(const std::vector<double>& z) {
    double lo = INFINITY, hi = -INFINITY;
    for (double v : z)
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    std::vector<double> out;
    if (!(hi > lo)) return out;
    double step = hi - lo > 1.0 ? 0.2 : hi - lo > 0.4 ? 0.1 : hi - lo > 0.1 ? 0.05 : 0.01;
    for (double l = std::ceil(lo / step) * step; l < hi; l += step)
        if (l > lo) out.push_back(std::round(l / step) * step);
    return out;
}

// two swept axes: the first is the heatmap's y, the second its x
std::string heatmap(const SweepSpec& s, const std::vector<ResultRow>& rows, const std::string& title,
                    const std::string& ylabel, const std::string& xlabel) {
    svg::Heatmap m;
    m.title = title;
    m.x = {xlabel, s.axes[1].log, 0, 0};
    m.y = {ylabel, s.axes[0].log, 0, 0};
    m.z_label = "B";
    m.xs = s.axes[1].values();
    m.ys = s.axes[0].values();
    m.z = column(rows, &ResultRow::bell);
    m.levels = round_levels(m.z);
    return svg::render(m);
}

Figure fig2L(int threads, bool sweeps_only) {
    Figure f{"fig2L", {}, {}, {}, {}};
    const double delta = 0.01, amin = 2.0 * (1.0 + delta);
    f.sweeps.push_back(spec(model::Background::Minkowski, Family::Gkmr, {axis("alpha", amin, 1e3, 80)},
                            {{"delta", delta}, {"beta", 0.0}}, threads));
    if (sweeps_only) return f;
    run(f);
    std::vector<double> a = column(f.results[0], &ResultRow::alpha), approx, plateau;
    for (double x : a) {
        approx.push_back(gkmr::minkowski_bell_approx(x, delta));
        plateau.push_back(gkmr::minkowski_bell_plateau(delta));
    }
    f.overlays = {{"small_delta_large_alpha", a, approx}, {"large_alpha_plateau", a, plateau}};
    svg::LinePlot p;
    p.title = "Minkowski, delta = 0.01";
    p.x = {"alpha", true, 0, 0};
    p.y = {"B", false, 0, 0};
    p.series = {series("full", a, column(f.results[0], &ResultRow::bell), kBlue),
                series("small-delta, large-alpha", a, approx, kOrange, "7,4"),
                series("large-alpha plateau", a, plateau, kGreen, "2,3")};
    f.svg = svg::render(p);
    return f;
}

Figure fig2R(int threads, bool sweeps_only) {
    Figure f{"fig2R", {}, {}, {}, {}};
    f.sweeps.push_back(spec(model::Background::Minkowski, Family::Gkmr, {axis("delta", 1e-2, 1e2, 60)},
                            {{"beta", 0.0}}, threads));
    if (sweeps_only) return f;
    run(f);
    std::vector<double> d = column(f.results[0], &ResultRow::delta), approx;
    for (double x : d) approx.push_back(gkmr::minkowski_bell_approx(2.0 * (1.0 + x), x));
    f.overlays = {{"small_delta_large_alpha", d, approx}};
    svg::LinePlot p;
    p.title = "Minkowski, alpha = alpha_min";
    p.x = {"delta", true, 0, 0};
    p.y = {"B", false, 0, 0};
    p.series = {series("full", d, column(f.results[0], &ResultRow::bell), kBlue),
                series("small-delta, large-alpha", d, approx, kOrange, "7,4")};
    f.svg = svg::render(p);
    return f;
}

Figure fig3(int threads, bool sweeps_only) {
    Figure f{"fig3", {}, {}, {}, {}};
    const double delta = 0.01;
    f.sweeps.push_back(spec(model::Background::DeSitter, Family::Gkmr,
                            {axis("alpha", 2.0 * (1.0 + delta), 1e2, 40), axis("HR", 1e-3, 1e3, 40)},
                            {{"delta", delta}, {"beta", 1e-4}}, threads));
    if (sweeps_only) return f;
    run(f);
    f.svg = heatmap(f.sweeps[0], f.results[0], "de Sitter, delta = 0.01, beta = 1e-4", "alpha", "HR");
    return f;
}

Figure fig4(int threads, bool sweeps_only) {
    Figure f{"fig4", {}, {}, {}, {}};
    const double delta = 0.01, beta = 1e-4, amin = 2.0 * (1.0 + delta);
    f.sweeps.push_back(spec(model::Background::DeSitter, Family::Gkmr, {axis("alpha", amin, 1.0 / beta, 80)},
                            {{"delta", delta}, {"beta", beta}, {"HR", 1e-2}}, threads));
    f.sweeps.push_back(spec(model::Background::Minkowski, Family::Gkmr, {axis("alpha", amin, 1.0 / beta, 80)},
                            {{"delta", delta}, {"beta", beta}}, threads));
    if (sweeps_only) return f;
    run(f);
    std::vector<double> a = column(f.results[0], &ResultRow::alpha);
    svg::LinePlot p;
    p.title = "de Sitter, HR = 1e-2, delta = 1e-2, beta = 1e-4";
    p.x = {"alpha", true, 0, 0};
    p.y = {"B", false, 0, 0};
    p.series = {series("de Sitter", a, column(f.results[0], &ResultRow::bell), kBlue),
                series("Minkowski", a, column(f.results[1], &ResultRow::bell), kOrange, "7,4")};
    f.svg = svg::render(p);
    return f;
}

Figure fig5(int threads, bool sweeps_only) {
    Figure f{"fig5", {}, {}, {}, {}};
    f.sweeps.push_back(spec(model::Background::DeSitter, Family::Gkmr, {axis("HR", 1e-3, 1e3, 60)},
                            {{"delta", 1e-2}, {"beta", 1e-4}}, threads));
    if (sweeps_only) return f;
    run(f);
    std::vector<double> h = column(f.results[0], &ResultRow::HR), twice;
    for (const ResultRow& r : f.results[0]) twice.push_back(2.0 * r.purity);
    f.overlays = {{"twice_purity", h, twice}};
    svg::LinePlot p;
    p.title = "de Sitter, alpha = alpha_min, delta = 1e-2, beta = 1e-4";
    p.x = {"HR", true, 0, 0};
    p.y = {"B", false, 0, 0};
    p.series = {series("B", h, column(f.results[0], &ResultRow::bell), kBlue),
                series("2 x purity", h, twice, kOrange, "7,4")};
    f.svg = svg::render(p);
    return f;
}

// small- and large-l limit curves of B for one covariance
void ell_limits(const model::SceneParams& s, const std::vector<double>& ells, Overlay& small, Overlay& large) {
    model::CovarianceMatrix g = model::build_covariance(s);
    model::ReducedA a = model::reduced_a(g);
    double plateau = 2.0 * std::abs(gkmr::sxsx(g));
    for (double l : ells) {
        small.x.push_back(l);
        small.y.push_back(2.0 * std::hypot(larsson::small_ell_sxsx(g, l), larsson::small_ell_szsz(a, l)));
        large.x.push_back(l);
        large.y.push_back(plateau);
    }
}

Figure fig6(int threads, bool sweeps_only) {
    Figure f{"fig6", {}, {}, {}, {}};
    f.sweeps.push_back(spec(model::Background::Minkowski, Family::Larsson, {axis("ell", 1e-2, 1e2, 20)},
                            {{"alpha", 3.0}, {"delta", 0.1}, {"beta", 0.0}}, threads));
    if (sweeps_only) return f;
    run(f);
    std::vector<double> l = column(f.results[0], &ResultRow::ell);
    Overlay small{"low_ell", {}, {}}, large{"large_ell", {}, {}};
    ell_limits({model::Background::Minkowski, 0.0, 3.0, 0.0, 0.1}, l, small, large);
    f.overlays = {small, large};
    svg::LinePlot p;
    p.title = "Larsson, Minkowski, alpha = 3, delta = 0.1";
    p.x = {"l", true, 0, 0};
    p.y = {"B", false, 0, 0};
    p.series = {series("full", l, column(f.results[0], &ResultRow::bell), kBlue),
                series("low-l", small.x, small.y, kRed, "7,4"), series("large-l", large.x, large.y, kRed, "2,3")};
    f.svg = svg::render(p);
    return f;
}

Figure fig7(int threads, bool sweeps_only) {
    Figure f{"fig7", {}, {}, {}, {}};
    const std::vector<double> left = {0.01, 0.1, 0.5}, right = {1.0, 3.0, 10.0};
    for (double hr : left)
        f.sweeps.push_back(spec(model::Background::DeSitter, Family::Larsson, {axis("ell", 1e-2, 1e2, 20)},
                                {{"alpha", 3.0}, {"delta", 0.1}, {"beta", 1e-4}, {"HR", hr}}, threads));
    for (double hr : right)
        f.sweeps.push_back(spec(model::Background::DeSitter, Family::Larsson, {axis("ell", 1e-2, 1e3, 20)},
                                {{"alpha", 3.0}, {"delta", 0.1}, {"beta", 1e-4}, {"HR", hr}}, threads));
    if (sweeps_only) return f;
    run(f);
    std::vector<double> l = column(f.results[3], &ResultRow::ell);
    Overlay small{"low_ell_HR1", {}, {}}, large{"large_ell_HR1", {}, {}};
    ell_limits({model::Background::DeSitter, 1.0, 3.0, 1e-4, 0.1}, l, small, large);
    f.overlays = {small, large};
    std::vector<svg::LinePlot> panels(2);
    for (int k = 0; k < 2; ++k) {
        panels[k].title = k == 0 ? "sub-Hubble" : "super-Hubble";
        panels[k].x = {"l", true, 0, 0};
        panels[k].y = {"B", false, 0, 0};
        for (int i = 0; i < 3; ++i) {
            const auto& rows = f.results[3 * k + i];
            std::ostringstream lab;
            lab << "HR = " << rows.front().HR;
            panels[k].series.push_back(series(lab.str(), column(rows, &ResultRow::ell),
                                              column(rows, &ResultRow::bell), kPalette[3 * k + i]));
        }
    }
    panels[1].series.push_back(series("low-l, HR = 1", small.x, small.y, kRed, "7,4"));
    panels[1].series.push_back(series("large-l, HR = 1", large.x, large.y, kRed, "2,3"));
    f.svg = svg::render_panels(panels);
    return f;
}

Figure fig8(int threads, bool sweeps_only) {
    Figure f{"fig8", {}, {}, {}, {}};
    f.sweeps.push_back(spec(model::Background::DeSitter, Family::Gkmr,
                            {axis("beta", 1e-6, 1e-1, 40), axis("HR", 1e-3, 1e3, 40)}, {{"delta", 0.01}}, threads));
    if (sweeps_only) return f;
    run(f);
    f.svg = heatmap(f.sweeps[0], f.results[0], "de Sitter, delta = 0.01, alpha = alpha_min", "beta", "HR");
    return f;
}

Figure fig9(int threads, bool sweeps_only) {
    Figure f{"fig9", {}, {}, {}, {}};
    f.sweeps.push_back(spec(model::Background::DeSitter, Family::Gkmr,
                            {axis("delta", 1e-3, 1e1, 40), axis("HR", 1e-3, 1e3, 40)}, {{"beta", 1e-3}}, threads));
    if (sweeps_only) return f;
    run(f);
    f.svg = heatmap(f.sweeps[0], f.results[0], "de Sitter, beta = 1e-3, alpha = alpha_min", "delta", "HR");
    return f;
}

Figure fig10(int threads, bool sweeps_only) {
    Figure f{"fig10", {}, {}, {}, {}};
    f.sweeps.push_back(spec(model::Background::DeSitter, Family::Gkmr,
                            {axis("beta", 1e-6, 1e-1, 40), axis("delta", 1e-3, 1e1, 40)}, {{"HR", 1e3}}, threads));
    if (sweeps_only) return f;
    run(f);
    f.svg = heatmap(f.sweeps[0], f.results[0], "de Sitter, HR = 1e3, alpha = alpha_min", "beta", "delta");
    return f;
}

void write_text(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
    f << content;
    if (!f) throw IoError("write to '" + p.string() + "' failed");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig2L", "fig2R", "fig3", "fig4", "fig5",
                                                 "fig6",  "fig7",  "fig8", "fig9", "fig10"};
    return ids;
}

namespace {

Figure build(const std::string& id, int threads, bool sweeps_only) {
    if (id == "fig2L") return fig2L(threads, sweeps_only);
    if (id == "fig2R") return fig2R(threads, sweeps_only);
    if (id == "fig3") return fig3(threads, sweeps_only);
    if (id == "fig4") return fig4(threads, sweeps_only);
    if (id == "fig5") return fig5(threads, sweeps_only);
    if (id == "fig6") return fig6(threads, sweeps_only);
    if (id == "fig7") return fig7(threads, sweeps_only);
    if (id == "fig8") return fig8(threads, sweeps_only);
    if (id == "fig9") return fig9(threads, sweeps_only);
    if (id == "fig10") return fig10(threads, sweeps_only);
    throw ConfigError("unknown figure id '" + id + "'");
}

}  // namespace

std::vector<SweepSpec> figure_sweeps(const std::string& id) { return build(id, 0, true).sweeps; }

FigureFiles reproduce_figure(const std::string& id, const std::string& out_dir, int threads) {
    Figure f = build(id, threads, false);

    json recipe;
    recipe["figure"] = id;
    recipe["sweeps"] = json::array();
    for (const SweepSpec& s : f.sweeps) {
        json j = s.to_json();
        j.erase("threads");  // does not affect the numbers
        recipe["sweeps"].push_back(j);
    }
    recipe["overlays"] = json::array();
    for (const Overlay& o : f.overlays) recipe["overlays"].push_back(o.name);

    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

    FigureFiles files;
    std::vector<ResultRow> all;
    for (const auto& rows : f.results) all.insert(all.end(), rows.begin(), rows.end());
    std::ostringstream csv;
    write_csv(csv, all, recipe);
    write_text(dir / (id + ".csv"), csv.str());
    files.paths.push_back((dir / (id + ".csv")).string());

    write_text(dir / (id + ".json"), recipe.dump(2) + "\n");
    files.paths.push_back((dir / (id + ".json")).string());

    if (!f.overlays.empty()) {
        std::ostringstream o;
        o << "# tool: bellfield " << kToolVersion << "\n";
        o << "# config_hash: fnv1a64:" << config_hash(recipe) << "\n";
        o << "series,x,y\n";
        for (const Overlay& ov : f.overlays)
            for (std::size_t i = 0; i < ov.x.size(); ++i) o << ov.name << ',' << fmt(ov.x[i]) << ',' << fmt(ov.y[i]) << '\n';
        write_text(dir / (id + "_overlays.csv"), o.str());
        files.paths.push_back((dir / (id + "_overlays.csv")).string());
    }

    write_text(dir / (id + ".svg"), f.svg);
    files.paths.push_back((dir / (id + ".svg")).string());
    return files;
}

}  // namespace bellfield::cli
