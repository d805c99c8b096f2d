#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "run_dir.hpp"

using namespace nanotalbot::cli;

int main(int argc, char** argv) {
  CLI::App app{"nanotalbot: nanosphere Talbot interferometer simulations"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  g.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> configs;
  std::string out = "runs";
  std::uint64_t seed = 0;
  app.add_option("--config", configs, "configuration file (TOML); repeatable for exclusion")
      ->required();
  app.add_option("--out", out, "output root; each run gets <root>/<timestamp>-<hash>/")
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides run.seed)");

  FringeOptions fringe;
  auto* c_fringe = app.add_subcommand("fringe", "fringe pattern at the configured acceleration");
  c_fringe->add_flag("--compare", fringe.compare, "overlay a = 0 (solid) and a = a_pi (dashed)");

  auto* c_oracle = app.add_subcommand("oracle-check", "phase-space engine vs wavefunction oracle");
  auto* c_excl = app.add_subcommand("exclusion", "alpha-lambda exclusion curves");
  auto* c_beta = app.add_subcommand("beta", "interference vs ballistic improvement factor");
  auto* c_forces = app.add_subcommand("forces", "force scans and systematic error budget");

  ShotsOptions shots;
  std::size_t n_shots = 0, n_repeats = 0;
  auto* c_shots = app.add_subcommand("shots", "single-shot Monte Carlo and 1/sqrt(N) check");
  auto* shots_opt = c_shots->add_option("--shots", n_shots, "shots per experiment");
  auto* repeats_opt = c_shots->add_option("--repeats", n_repeats, "experiments per shot count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  for (const auto& c : configs) g.configs.emplace_back(c);
  g.out = out;
  if (*seed_opt) g.seed = seed;
  if (*shots_opt) shots.shots = n_shots;
  if (*repeats_opt) shots.repeats = n_repeats;

  try {
    if (*c_fringe) return cmd_fringe(g, fringe, std::cout);
    if (*c_oracle) return cmd_oracle_check(g, std::cout);
    if (*c_excl) return cmd_exclusion(g, std::cout);
    if (*c_beta) return cmd_beta(g, std::cout);
    if (*c_forces) return cmd_forces(g, std::cout);
    if (*c_shots) return cmd_shots(g, shots, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_config;
}
