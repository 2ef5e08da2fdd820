#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bellfield/cli.hpp"
#include "bellfield/gkmr.hpp"
#include "bellfield/larsson.hpp"
#include "bellfield/model.hpp"

using namespace bellfield;
using nlohmann::json;

namespace {

cli::SweepSpec load(const std::string& name) {
    std::ifstream in(std::filesystem::path(BELLFIELD_SOURCE_DIR) / "configs" / name);
    REQUIRE(in.good());
    return cli::SweepSpec::from_json(json::parse(in));
}

}  // namespace

TEST_CASE("shipped configs parse and round-trip") {
    for (const char* name : {"minkowski_alpha.json", "desitter_heatmap.json", "larsson_ell.json"}) {
        cli::SweepSpec s = load(name);
        CHECK(cli::SweepSpec::from_json(s.to_json()).to_json() == s.to_json());
    }
}

TEST_CASE("flat-space alpha sweep approaches its plateau from above") {
    cli::SweepSpec s = load("minkowski_alpha.json");
    auto rows = cli::run_sweep(s);
    REQUIRE(rows.size() == 40);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].status == "ok");
        CHECK(rows[i].bell < rows[i - 1].bell);
    }
    double plateau = rows.back().bell;
    CHECK(plateau > 0.74);
    CHECK(plateau < 0.76);
    CHECK(rows.front().bell < 2.0);
}

TEST_CASE("de Sitter heatmap stays below the classical bound") {
    cli::SweepSpec s = load("desitter_heatmap.json");
    auto rows = cli::run_sweep(s);
    REQUIRE(rows.size() == 1600);
    double bmax = 0.0;
    for (const auto& r : rows) {
        REQUIRE(r.status == "ok");
        bmax = std::max(bmax, r.bell);
        CHECK(r.purity > 0.0);
        CHECK(r.purity <= 1.0);
    }
    CHECK(bmax < 2.0);
    CHECK(bmax > 1.4);
}

TEST_CASE("bin-operator sweep joins its two limits") {
    cli::SweepSpec s = load("larsson_ell.json");
    auto rows = cli::run_sweep(s);
    REQUIRE(rows.size() == 20);
    CHECK(rows.front().bell == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(rows.front().bell < 2.0);
    model::CovarianceMatrix g = model::build_covariance({model::Background::Minkowski, 0.0, 3.0, 0.0, 0.1});
    double wide = 2.0 * std::abs(gkmr::sxsx(g));
    CHECK(rows.back().bell == doctest::Approx(wide).epsilon(1e-3));
    for (const auto& r : rows) CHECK(r.bell < 2.0);
}

TEST_CASE("figure files carry provenance matching the recipe") {
    auto dir = std::filesystem::temp_directory_path() / "bellfield_pipeline_fig2R";
    std::filesystem::remove_all(dir);
    cli::reproduce_figure("fig2R", dir.string(), 1);
    json recipe = json::parse(std::ifstream(dir / "fig2R.json"));
    std::ifstream csv(dir / "fig2R.csv");
    std::string tool, hash;
    std::getline(csv, tool);
    std::getline(csv, hash);
    CHECK(tool == std::string("# tool: bellfield ") + cli::kToolVersion);
    CHECK(hash == "# config_hash: fnv1a64:" + cli::config_hash(recipe));
    std::ifstream svg(dir / "fig2R.svg");
    std::string first;
    std::getline(svg, first);
    CHECK(first.rfind("<?xml", 0) == 0);
    // rerunning the recorded recipe reproduces the file byte for byte
    cli::SweepSpec s = cli::SweepSpec::from_json(recipe["sweeps"][0]);
    std::ostringstream rerun;
    cli::write_csv(rerun, cli::run_sweep(s), recipe);
    std::ifstream whole(dir / "fig2R.csv");
    std::stringstream file;
    file << whole.rdbuf();
    CHECK(rerun.str() == file.str());
    std::filesystem::remove_all(dir);
}
