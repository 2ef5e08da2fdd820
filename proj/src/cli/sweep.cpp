#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "bellfield/cli.hpp"
#include "bellfield/errors.hpp"
#include "bellfield/gkmr.hpp"
#include "bellfield/svg.hpp"

namespace bellfield::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    // grid points, first axis slowest
    std::vector<std::vector<double>> vals;
    std::size_t total = 1;
    for (const GridAxis& a : spec.axes) {
        vals.push_back(a.values());
        total *= vals.back().size();
    }
    std::vector<ResultRow> rows(total);
    auto point = [&](std::size_t idx) {
        std::map<std::string, double> p = spec.fixed;
        std::size_t rem = idx;
        for (std::size_t k = spec.axes.size(); k-- > 0;) {
            p[spec.axes[k].name] = vals[k][rem % vals[k].size()];
            rem /= vals[k].size();
        }
        return p;
    };
    auto evaluate = [&](std::size_t idx) {
        auto p = point(idx);
        ResultRow& r = rows[idx];
        auto get = [&](const char* k, double d) { return p.count(k) ? p.at(k) : d; };
        r.delta = get("delta", 0.0);
        r.beta = get("beta", 0.0);
        r.HR = spec.background == model::Background::DeSitter ? get("HR", 0.0) : std::nan("");
        r.ell = spec.family == Family::Larsson ? get("ell", 0.0) : std::nan("");
        double amin = 2.0 * (1.0 + r.delta);
        r.alpha = get("alpha", amin);
        if (r.alpha < amin) {
            r.alpha = amin;
            r.alpha_clamped = p.count("alpha") > 0;
        }
        try {
            model::SceneParams s{spec.background, std::isnan(r.HR) ? 0.0 : r.HR, r.alpha, r.beta, r.delta};
            model::CovarianceMatrix g = model::build_covariance(s);
            gkmr::CorrelatorSet c;
            if (spec.family == Family::Gkmr) {
                c = gkmr::bell(g);
            } else {
                larsson::LarssonConfig cfg;
                cfg.ell = r.ell;
                cfg.tail_tol = spec.tail_tol;
                cfg.max_shell = spec.max_shell;
                larsson::LarssonSet l = larsson::bell_larsson(g, cfg);
                c = l.correlators;
                r.shells = l.shells;
                r.tail = l.tail;
                r.approx = l.approx;
            }
            r.sxsx = c.sxsx;
            r.szsz = c.szsz;
            r.bell = c.bell;
            r.purity = c.purity;
        } catch (const Error& e) {
            r.sxsx = r.szsz = r.bell = r.purity = std::nan("");
            r.message = e.what();
            if (dynamic_cast<const DivergenceError*>(&e)) r.status = "divergence";
            else if (dynamic_cast<const DomainError*>(&e)) r.status = "domain";
            else if (dynamic_cast<const ConvergenceError*>(&e)) r.status = "convergence";
            else if (dynamic_cast<const UnphysicalStateError*>(&e)) r.status = "unphysical";
            else if (dynamic_cast<const ConditioningError*>(&e)) r.status = "conditioning";
            else if (dynamic_cast<const MatrixError*>(&e)) r.status = "matrix";
            else if (dynamic_cast<const RangeError*>(&e)) r.status = "range";
            else r.status = "error";
        }
    };
    unsigned n = spec.threads > 0 ? unsigned(spec.threads) : std::max(1u, std::thread::hardware_concurrency());
    n = unsigned(std::min<std::size_t>(n, total));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < total;) evaluate(i);
    };
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string config_hash(const json& config) {
    std::string s = config.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, const json& config) {
    out << "# tool: bellfield " << kToolVersion << "\n";
    out << "# config_hash: fnv1a64:" << config_hash(config) << "\n";
    out << "# config: " << config.dump() << "\n";
    out << "alpha,beta,delta,ell,HR,sxsx,szsz,bell,purity,shells,tail,approx,alpha_clamped,status\n";
    auto opt = [](double v) { return std::isnan(v) ? std::string() : fmt(v); };
    for (const ResultRow& r : rows) {
        bool larsson = !std::isnan(r.ell);
        out << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.delta) << ',' << opt(r.ell) << ',' << opt(r.HR)
            << ',' << fmt(r.sxsx) << ',' << fmt(r.szsz) << ',' << fmt(r.bell) << ',' << fmt(r.purity) << ','
            << (larsson ? std::to_string(r.shells) : "") << ',' << (larsson ? fmt(r.tail) : "") << ','
            << (r.approx ? 1 : 0) << ',' << (r.alpha_clamped ? 1 : 0) << ',' << r.status << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows, const json& config) {
    json j;
    j["tool"] = std::string("bellfield ") + kToolVersion;
    j["config_hash"] = "fnv1a64:" + config_hash(config);
    j["config"] = config;
    j["rows"] = json::array();
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    for (const ResultRow& r : rows) {
        json row = {{"alpha", r.alpha}, {"beta", r.beta},     {"delta", r.delta},   {"ell", num(r.ell)},
                    {"HR", num(r.HR)},  {"sxsx", num(r.sxsx)}, {"szsz", num(r.szsz)}, {"bell", num(r.bell)},
                    {"purity", num(r.purity)}, {"approx", r.approx}, {"alpha_clamped", r.alpha_clamped},
                    {"status", r.status}};
        if (!std::isnan(r.ell)) {
            row["shells"] = r.shells;
            row["tail"] = r.tail;
        }
        if (!r.message.empty()) row["message"] = r.message;
        j["rows"].push_back(row);
    }
    out << j.dump(1) << "\n";
}

namespace {

double param(const ResultRow& r, const std::string& name) {
    if (name == "alpha") return r.alpha;
    if (name == "beta") return r.beta;
    if (name == "delta") return r.delta;
    if (name == "ell") return r.ell;
    return r.HR;
}

std::string default_plot(const std::vector<ResultRow>& rows, const SweepSpec& spec) {
    if (spec.axes.size() == 2) {
        svg::Heatmap m;
        const GridAxis &ay = spec.axes[0], &ax = spec.axes[1];
        m.title = "B";
        m.x = {ax.name, ax.log, 0, 0};
        m.y = {ay.name, ay.log, 0, 0};
        m.z_label = "B";
        m.xs = ax.values();
        m.ys = ay.values();
        for (const ResultRow& r : rows) m.z.push_back(r.bell);
        m.levels = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
        return svg::render(m);
    }
    svg::LinePlot p;
    std::string xname = spec.axes.empty() ? "alpha" : spec.axes[0].name;
    p.x = {xname, !spec.axes.empty() && spec.axes[0].log, 0, 0};
    p.y = {"correlator", false, 0, 0};
    svg::Series b{"B", {}, {}, "#1f77b4", ""}, x{"<SxSx>", {}, {}, "#ff7f0e", "6,4"},
        z{"<SzSz>", {}, {}, "#2ca02c", "2,3"};
    for (const ResultRow& r : rows) {
        double v = param(r, xname);
        b.x.push_back(v);
        b.y.push_back(r.bell);
        x.x.push_back(v);
        x.y.push_back(r.sxsx);
        z.x.push_back(v);
        z.y.push_back(r.szsz);
    }
    p.series = {b, x, z};
    return svg::render(p);
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path fp(path);
    std::error_code ec;
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void emit(const std::vector<ResultRow>& rows, const SweepSpec& spec) {
    std::ostringstream body;
    json cfg = spec.to_json();
    if (spec.format == "json") write_json(body, rows, cfg);
    else write_csv(body, rows, cfg);
    if (spec.output.empty()) {
        std::cout << body.str();
        if (!std::cout) throw IoError("write to stdout failed");
    } else {
        write_file(spec.output, body.str());
    }
    if (spec.plot) {
        std::filesystem::path p = spec.output.empty() ? std::filesystem::path("sweep.svg") : std::filesystem::path(spec.output);
        p.replace_extension(".svg");
        write_file(p.string(), default_plot(rows, spec));
    }
}

}  // namespace bellfield::cli
