#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellfield/larsson.hpp"
#include "bellfield/model.hpp"

namespace bellfield::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Family { Gkmr, Larsson };

struct GridAxis {
    std::string name;  // HR, alpha, beta, delta or ell
    double min = 0.0, max = 0.0;
    int count = 1;
    bool log = false;

    std::vector<double> values() const;
};

struct SweepSpec {
    model::Background background = model::Background::Minkowski;
    std::vector<GridAxis> axes;            // first axis varies slowest
    std::map<std::string, double> fixed;   // alpha may be omitted to mean alpha_min
    Family family = Family::Gkmr;
    double tail_tol = 1e-10;
    int max_shell = 400;
    std::string output;                    // empty: stdout
    std::string format = "csv";            // csv or json
    bool plot = false;
    int threads = 0;                       // 0: hardware concurrency

    void validate() const;
    nlohmann::json to_json() const;
    static SweepSpec from_json(const nlohmann::json& j);
};

// dotted key path, e.g. fixed.delta=0.1, axes.0.count=20, background=desitter;
// the value is parsed as JSON when possible and kept as a string otherwise
void apply_override(nlohmann::json& config, const std::string& assignment);

struct ResultRow {
    double HR = 0.0, alpha = 0.0, beta = 0.0, delta = 0.0, ell = 0.0;
    double sxsx = 0.0, szsz = 0.0, bell = 0.0, purity = 0.0;
    int shells = 0;
    double tail = 0.0;
    bool approx = false;
    bool alpha_clamped = false;
    std::string status = "ok";  // or the error class of a failed point
    std::string message;
};

std::vector<ResultRow> run_sweep(const SweepSpec& spec);

// hex FNV-1a 64 of the canonical (sorted-key, compact) JSON dump
std::string config_hash(const nlohmann::json& config);

// `config` is recorded in the provenance lines (its hash, and the document itself)
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, const nlohmann::json& config);
void write_json(std::ostream& out, const std::vector<ResultRow>& rows, const nlohmann::json& config);

// writes to spec.output (or stdout) and, with plot set, an SVG next to it
void emit(const std::vector<ResultRow>& rows, const SweepSpec& spec);

// figure reproduction: fig2L fig2R fig3 fig4 fig5 fig6 fig7 fig8 fig9 fig10
const std::vector<std::string>& figure_ids();

struct FigureFiles {
    std::vector<std::string> paths;
};

// the sweeps behind a figure, without running them
std::vector<SweepSpec> figure_sweeps(const std::string& id);

FigureFiles reproduce_figure(const std::string& id, const std::string& out_dir, int threads = 0);

// oracle suite
struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidateOptions {
    std::uint64_t seed = 20240611;
    bool fast = false;
    double perturb_gamma = 0.0;  // test hook: added to gamma_13 before the Monte-Carlo checks
};

struct Report {
    std::vector<Check> checks;
    bool all_passed() const;
};

Report validate(const ValidateOptions& opt);
void write_report(std::ostream& out, const Report& r);

}  // namespace bellfield::cli
