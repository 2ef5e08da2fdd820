#include <algorithm>
#include <cmath>
#include <set>

#include "bellfield/cli.hpp"
#include "bellfield/errors.hpp"

namespace bellfield::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kParams = {"HR", "alpha", "beta", "delta", "ell"};

}  // namespace

std::vector<double> GridAxis::values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        double t = count == 1 ? 0.0 : double(i) / (count - 1);
        v[i] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
    }
    if (count > 1) {
        v.front() = min;
        v.back() = max;
    }
    return v;
}

namespace {

// ranges that make every point of a sweep invalid; alpha is clamped instead
void check_range(const std::string& name, double v) {
    bool ok = true;
    if (name == "delta" || name == "HR" || name == "ell") ok = v > 0.0;
    else if (name == "beta") ok = v >= 0.0 && v < 1.0;
    if (!ok) throw ConfigError("'" + name + "' out of range: " + json(v).dump());
}

}  // namespace

void SweepSpec::validate() const {
    std::set<std::string> seen;
    for (const GridAxis& a : axes) {
        if (!kParams.count(a.name)) throw ConfigError("unknown axis '" + a.name + "'");
        if (!seen.insert(a.name).second) throw ConfigError("axis '" + a.name + "' given twice");
        if (fixed.count(a.name)) throw ConfigError("'" + a.name + "' is both an axis and fixed");
        if (a.count < 1) throw ConfigError("axis '" + a.name + "': count must be >= 1");
        if (!(a.min <= a.max) || !std::isfinite(a.min) || !std::isfinite(a.max))
            throw ConfigError("axis '" + a.name + "': need finite min <= max");
        if (a.log && !(a.min > 0.0)) throw ConfigError("axis '" + a.name + "': log scale needs min > 0");
        check_range(a.name, a.min);
        check_range(a.name, a.max);
    }
    for (const auto& [k, v] : fixed) {
        if (!kParams.count(k)) throw ConfigError("unknown fixed parameter '" + k + "'");
        if (!std::isfinite(v)) throw ConfigError("fixed parameter '" + k + "' must be finite");
        check_range(k, v);
    }
    auto have = [&](const std::string& k) { return seen.count(k) || fixed.count(k); };
    if (!have("delta")) throw ConfigError("delta must be fixed or swept");
    if (background == model::Background::DeSitter && !have("HR"))
        throw ConfigError("de Sitter sweeps need HR");
    if (family == Family::Larsson && !have("ell")) throw ConfigError("larsson sweeps need ell");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (!(tail_tol > 0.0)) throw ConfigError("larsson.tail_tol must be positive");
    if (max_shell < 1) throw ConfigError("larsson.max_shell must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

json SweepSpec::to_json() const {
    json j;
    j["background"] = model::background_name(background);
    j["operator"] = family == Family::Gkmr ? "gkmr" : "larsson";
    j["axes"] = json::array();
    for (const GridAxis& a : axes)
        j["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count},
                             {"scale", a.log ? "log" : "linear"}});
    j["fixed"] = json::object();
    for (const auto& [k, v] : fixed) j["fixed"][k] = v;
    j["larsson"] = {{"tail_tol", tail_tol}, {"max_shell", max_shell}};
    j["output"] = output;
    j["format"] = format;
    j["plot"] = plot;
    j["threads"] = threads;
    return j;
}

SweepSpec SweepSpec::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> keys = {"background", "operator", "axes",   "fixed",
                                               "larsson",    "output",   "format", "plot", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
    SweepSpec s;
    try {
        std::string bg = j.value("background", "minkowski");
        if (bg == "minkowski") s.background = model::Background::Minkowski;
        else if (bg == "desitter") s.background = model::Background::DeSitter;
        else throw ConfigError("background must be minkowski or desitter");
        std::string op = j.value("operator", "gkmr");
        if (op == "gkmr") s.family = Family::Gkmr;
        else if (op == "larsson") s.family = Family::Larsson;
        else throw ConfigError("operator must be gkmr or larsson");
        if (j.contains("axes")) {
            for (const json& a : j.at("axes")) {
                GridAxis g;
                g.name = a.at("name").get<std::string>();
                g.min = a.at("min").get<double>();
                g.max = a.at("max").get<double>();
                g.count = a.value("count", 1);
                std::string sc = a.value("scale", "linear");
                if (sc != "linear" && sc != "log") throw ConfigError("axis scale must be linear or log");
                g.log = sc == "log";
                s.axes.push_back(g);
            }
        }
        if (j.contains("fixed")) {
            for (auto it = j.at("fixed").begin(); it != j.at("fixed").end(); ++it) {
                // "alpha": "min" is the same as leaving alpha out
                if (it.key() == "alpha" && it.value().is_string() && it.value() == "min") continue;
                s.fixed[it.key()] = it.value().get<double>();
            }
        }
        if (j.contains("larsson")) {
            s.tail_tol = j.at("larsson").value("tail_tol", s.tail_tol);
            s.max_shell = j.at("larsson").value("max_shell", s.max_shell);
        }
        s.output = j.value("output", "");
        s.format = j.value("format", "csv");
        s.plot = j.value("plot", false);
        s.threads = j.value("threads", 0);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    s.validate();
    return s;
}

void apply_override(json& config, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        auto dot = key.find('.', start);
        std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("--set: empty key component in '" + key + "'");
        bool index = !part.empty() && std::all_of(part.begin(), part.end(), ::isdigit);
        if (index && node->is_array()) {
            std::size_t i = std::stoul(part);
            if (i >= node->size()) throw ConfigError("--set: index out of range in '" + key + "'");
            node = &(*node)[i];
        } else {
            if (!node->is_object() && !node->is_null()) throw ConfigError("--set: '" + key + "' is not an object path");
            node = &(*node)[part];
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = value;
}

}  // namespace bellfield::cli
