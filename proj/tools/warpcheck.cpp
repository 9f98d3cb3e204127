#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "warpcheck/catalog.hpp"
#include "warpcheck/errors.hpp"
#include "warpcheck/report.hpp"

namespace {

int run(const warpcheck::Scenario& scenario, const warpcheck::RunOptions& options, bool json) {
  const warpcheck::Report report = warpcheck::run_scenario(scenario, options);
  if (json) {
    std::cout << warpcheck::render_json(report);
  } else {
    const bool color = isatty(STDOUT_FILENO) && std::getenv("NO_COLOR") == nullptr;
    std::cout << warpcheck::render_text(report, color);
  }
  std::cout.flush();
  std::fprintf(stderr, "wall time %.3f s\n", report.wall_seconds);
  return warpcheck::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Killing-type identities on warped products and static spacetimes"};
  app.set_version_flag("--version", warpcheck::version_string());
  app.fallthrough();

  std::string scenario_path;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double atol = 0.0;
  double rtol = 0.0;
  bool json = false;

  auto* scenario_opt = app.add_option("--scenario", scenario_path, "Scenario file to run");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every check (default: per check, else 0)");
  auto* samples_opt =
      app.add_option("--samples", samples, "Sample count for every check (default: per check, else 100)")
          ->check(CLI::PositiveNumber);
  auto* atol_opt = app.add_option("--tol-abs", atol, "Absolute tolerance (default 1e-10)")->check(CLI::NonNegativeNumber);
  auto* rtol_opt = app.add_option("--tol-rel", rtol, "Relative tolerance (default 1e-8)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", json, "Emit JSON lines instead of text");

  auto* list = app.add_subcommand("list-examples", "List the bundled scenarios");
  std::string example;
  auto* run_example = app.add_subcommand("run-example", "Run a bundled scenario");
  run_example->add_option("name", example, "Scenario name from list-examples")->required();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  warpcheck::RunOptions options;
  if (*seed_opt) options.seed = seed;
  if (*samples_opt) options.samples = samples;
  if (*atol_opt) options.atol = atol;
  if (*rtol_opt) options.rtol = rtol;

  try {
    if (*list) {
      std::cout << warpcheck::list_examples();
      return 0;
    }
    if (*run_example) {
      if (*scenario_opt) throw warpcheck::ConfigError("--scenario and run-example are exclusive");
      return run(warpcheck::load_example(example), options, json);
    }
    if (!*scenario_opt) {
      std::cerr << app.help();
      return 2;
    }
    return run(warpcheck::Scenario::load(scenario_path), options, json);
  } catch (const warpcheck::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
