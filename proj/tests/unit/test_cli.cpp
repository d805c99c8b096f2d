#include <doctest.h>

#ifdef NANOTALBOT_CLI_PATH

#include <algorithm>
#include <json.hpp>

#include "cli_run.hpp"
#include "svg.hpp"

using namespace test_support;

namespace {

const std::string exe = NANOTALBOT_CLI_PATH;

struct Workspace {
  fs::path dir = scratch_dir("cli");
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path config(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    write_file(p, text);
    return p;
  }
};

std::string args(const std::string& verb, const fs::path& cfg, const std::string& extra = "") {
  return "--config " + quote(cfg.string()) + " --jobs 1 " + extra + " " + verb;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("missing config file exits 2 and names the path") {
    Workspace w;
    const auto r = run_cli(exe, args("fringe", w.dir / "absent.toml"), w.dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("absent.toml") != std::string::npos);
    CHECK(r.run_dir.empty());
  }

  TEST_CASE("schema problems exit 2") {
    Workspace w;
    const auto bad_key = run_cli(exe, args("fringe", w.config("k.toml", "[trap]\nfreq = 1\n")), w.dir);
    CHECK(bad_key.exit_code == 2);
    CHECK(bad_key.stderr_text.find("freq") != std::string::npos);
    const auto empty_grid =
        run_cli(exe, args("exclusion", w.config("e.toml", "[yukawa]\nlambdas_um = []\n")), w.dir);
    CHECK(empty_grid.exit_code == 2);
    const auto no_verb = run_cli(exe, "--config " + quote(w.config("n.toml", "").string()), w.dir);
    CHECK(no_verb.exit_code == 2);
  }

  TEST_CASE("fringe compare is deterministic and writes a manifest") {
    Workspace w;
    const auto cfg = w.config("f.toml", small_config());
    const auto a = run_cli(exe, args("fringe --compare", cfg), w.dir);
    const auto b = run_cli(exe, args("fringe --compare", cfg), w.dir);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    for (const char* f : {"fringe_a0.csv", "fringe_api.csv", "fringe_compare.svg"})
      CHECK(slurp(a.run_dir / f) == slurp(b.run_dir / f));
    const auto m = nlohmann::json::parse(slurp(a.run_dir / "manifest.json"));
    CHECK(m["command"] == "fringe --compare");
    CHECK(m["seed"] == 7);
    CHECK(m["outputs"].size() >= 5);
    const auto s = nlohmann::json::parse(slurp(a.run_dir / "summary.json"));
    CHECK(s.dump().find("phase") != std::string::npos);
  }

  TEST_CASE("coarse oracle grid fails the check with exit 1") {
    Workspace w;
    const auto r = run_cli(
        exe, args("oracle-check", w.config("o.toml", small_config("[oracle]\nforced_points = 1024\n"))),
        w.dir);
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("FAIL") != std::string::npos);
  }

  TEST_CASE("oracle check rejects thermal states as a configuration error") {
    Workspace w;
    const auto r = run_cli(
        exe, args("oracle-check", w.config("t.toml", "[trap]\ntemperature_K = 1e-6\n")), w.dir);
    CHECK(r.exit_code == 2);
  }

  TEST_CASE("single-point beta sweep") {
    Workspace w;
    const auto cfg =
        w.config("b.toml", "[beta]\nmasses_M0 = [1.0]\ntemperatures_K = [0.0]\n");
    const auto r = run_cli(exe, args("beta", cfg), w.dir);
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(r.run_dir / "beta.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.rfind("mass_kg,", 0) == 0);
  }

  TEST_CASE("forces writes a budget with thresholds") {
    Workspace w;
    const auto r = run_cli(exe, args("forces", w.config("s.toml", small_config())), w.dir);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(r.run_dir / "budget.json"));
    CHECK(j["entries"].size() >= 4);
    CHECK(fs::exists(r.run_dir / "y_scan.csv"));
    CHECK(fs::exists(r.run_dir / "casimir_polder.svg"));
  }

  TEST_CASE("shots honour the seed") {
    Workspace w;
    const auto cfg = w.config("m.toml", small_config());
    const auto a = run_cli(exe, args("shots", cfg, "--seed 11"), w.dir);
    const auto b = run_cli(exe, args("shots", cfg, "--seed 11"), w.dir);
    const auto c = run_cli(exe, args("shots", cfg, "--seed 12"), w.dir);
    REQUIRE(a.exit_code == 0);
    REQUIRE(c.exit_code == 0);
    CHECK(slurp(a.run_dir / "positions.csv") == slurp(b.run_dir / "positions.csv"));
    CHECK(slurp(a.run_dir / "positions.csv") != slurp(c.run_dir / "positions.csv"));
    const auto m = nlohmann::json::parse(slurp(a.run_dir / "manifest.json"));
    CHECK(m["seed"] == 11);
  }

  TEST_CASE("svg renderer marks dashed series") {
    nanotalbot::cli::PlotSpec p;
    p.title = "t";
    p.series.push_back({"solid", {1, 2, 3}, {1, 4, 9}, false, false});
    p.series.push_back({"dashed", {1, 2, 3}, {2, 3, 4}, true, false});
    const std::string svg = nanotalbot::cli::render_svg(p);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg == nanotalbot::cli::render_svg(p));
  }
}

#endif
