#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellfield/cli.hpp"
#include "bellfield/errors.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

nlohmann::json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bellfield::IoError("cannot read config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) throw bellfield::ConfigError("'" + path + "' is not valid JSON");
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-operator expectation values for a Gaussian field over two patches"};
    app.set_version_flag("--version", std::string("bellfield ") + bellfield::cli::kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int threads = -1;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep described by a JSON config");
    sweep->add_option("--config", config_path, "JSON sweep config")->required();
    sweep->add_option("--set", overrides, "override a config key, e.g. fixed.delta=0.1");
    sweep->add_option("--threads", threads, "worker threads (0: all cores)");

    std::string figure_id, out_dir;
    auto* figure = app.add_subcommand("figure", "reproduce a figure as CSV, JSON recipe and SVG");
    figure->add_option("id", figure_id, "fig2L fig2R fig3 ... fig10, or all")->required();
    figure->add_option("--out", out_dir, "output directory")->required();
    figure->add_option("--threads", threads, "worker threads (0: all cores)");

    bellfield::cli::ValidateOptions vopt;
    auto* validate = app.add_subcommand("validate", "run the oracle suite");
    validate->add_option("--seed", vopt.seed, "Monte-Carlo seed");
    validate->add_flag("--fast", vopt.fast, "fewer points and samples");
    validate->add_option("--perturb-gamma", vopt.perturb_gamma,
                         "offset added to the closed-form gamma_13; the suite should then fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*sweep) {
            nlohmann::json cfg = read_config(config_path);
            for (const std::string& o : overrides) bellfield::cli::apply_override(cfg, o);
            if (threads >= 0) cfg["threads"] = threads;
            bellfield::cli::SweepSpec spec = bellfield::cli::SweepSpec::from_json(cfg);
            bellfield::cli::emit(bellfield::cli::run_sweep(spec), spec);
        } else if (*figure) {
            std::vector<std::string> ids;
            if (figure_id == "all") ids = bellfield::cli::figure_ids();
            else ids = {figure_id};
            for (const std::string& id : ids)
                for (const std::string& p : bellfield::cli::reproduce_figure(id, out_dir, std::max(threads, 0)).paths)
                    std::cout << p << "\n";
        } else if (*validate) {
            bellfield::cli::Report r = bellfield::cli::validate(vopt);
            bellfield::cli::write_report(std::cout, r);
            if (!r.all_passed()) return kValidation;
        }
    } catch (const bellfield::IoError& e) {
        std::cerr << "bellfield: " << e.what() << "\n";
        return kIo;
    } catch (const bellfield::ConfigError& e) {
        std::cerr << "bellfield: " << e.what() << "\n";
        return kUsage;
    } catch (const bellfield::Error& e) {
        std::cerr << "bellfield: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
