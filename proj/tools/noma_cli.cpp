#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "noma/scenario.hpp"

namespace {

constexpr int kValidationFailure = 1;
constexpr int kConfigError = 2;

int run_fixtures() {
  bool all = true;
  for (const auto& fixture : noma::scenario::builtin_fixtures()) {
    auto r = noma::scenario::run_fixture(fixture);
    all = all && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " value=" << noma::scenario::format_number(r.value)
              << " expected=" << noma::scenario::format_number(r.expected) << "\n";
  }
  return all ? EXIT_SUCCESS : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cell NOMA power control scenarios"};
  app.require_subcommand(0, 1);
  bool fixtures = false;
  app.add_flag("--fixtures", fixtures, "Run the built-in analytic fixtures and print PASS/FAIL");

  auto* run = app.add_subcommand("run", "Run a scenario configuration");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string algo;
  std::string format = "csv";
  run->add_option("config", config_path, "Scenario configuration (JSON)")->required();
  run->add_option("--seed", seed, "Override the first seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--algo", algo, "Override the algorithm")->check(CLI::IsMember({"power-min", "rate-max"}));
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (fixtures) return run_fixtures();
  if (!run->parsed()) {
    std::cout << app.help();
    return kConfigError;
  }

  noma::scenario::ScenarioConfig config;
  try {
    config = noma::scenario::load_config(config_path);
    if (seed) config.seed = *seed;
    if (!algo.empty()) config.algorithm = noma::scenario::parse_algorithm(algo);
  } catch (const noma::scenario::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  }

  auto artifacts = noma::scenario::run_scenario(config);
  noma::scenario::write_artifacts(artifacts, out_dir,
                                  format == "json" ? noma::scenario::OutputFormat::json
                                                   : noma::scenario::OutputFormat::csv);
  std::size_t converged = 0;
  for (const auto& row : artifacts.summary) converged += row.converged ? 1 : 0;
  std::cout << artifacts.summary.size() << " runs, " << converged << " converged, output in " << out_dir << "\n";
  if (!artifacts.all_validated()) {
    std::cerr << "validation failed for at least one converged run\n";
    return kValidationFailure;
  }
  return EXIT_SUCCESS;
}
