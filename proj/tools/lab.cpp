#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geoint/experiments.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kCriterionFailure = 2;

std::filesystem::path json_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  return p.replace_extension(".json");
}

void print_catalog() {
  for (const auto& e : geoint::list_experiments())
    std::cout << e.command << " -> " << e.anchor << "\n    columns: " << e.columns
              << "\n    criteria: " << e.criteria << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on period integrals of eigenfunctions"};
  std::string experiment, config_file, grid, surface, out, case_name;
  double lambda_max = 0.0, T = 0.0;
  std::uint64_t seed = 1;
  app.add_option("experiment", experiment, "experiment name, or 'list'")->required();
  auto* o_lambda = app.add_option("--lambda-max", lambda_max, "largest frequency");
  auto* o_grid = app.add_option("--grid", grid, "comma-separated grid (frequencies, or degrees for restriction)");
  auto* o_T = app.add_option("--T", T, "window length / ball radius");
  auto* o_surface = app.add_option("--surface", surface, "sphere or torus");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized sweeps");
  auto* o_out = app.add_option("--out", out, "CSV path; the JSON summary goes next to it");
  auto* o_case = app.add_option("--case", case_name, "experiment-specific case selector");
  app.add_option("--config", config_file, "key=value file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (experiment == "list") {
    print_catalog();
    return 0;
  }

  geoint::ExperimentConfig config;
  try {
    if (!geoint::parse_experiment(experiment)) throw geoint::ConfigError("unknown experiment '" + experiment + "'");
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw geoint::ConfigError("cannot read config file " + config_file);
      std::stringstream text;
      text << in.rdbuf();
      geoint::apply_config_text(config, text.str());
    }
    geoint::apply_setting(config, "experiment", experiment);
    if (*o_lambda) config.lambda_max = lambda_max;
    if (*o_grid) config.grid = geoint::parse_grid(grid);
    if (*o_T) config.T = T;
    if (*o_surface) geoint::apply_setting(config, "surface", surface);
    if (*o_seed) config.seed = seed;
    if (*o_out) config.out = out;
    if (*o_case) config.case_name = case_name;
    if (config.out.empty()) config.out = experiment + ".csv";

    const geoint::ResultTable table = geoint::run_experiment(config);

    std::ofstream csv(config.out);
    if (!csv) throw std::runtime_error("cannot write " + config.out);
    geoint::write_csv(table, csv);
    std::ofstream json(json_path(config.out));
    json << geoint::summary_json(table).dump(2) << '\n';

    if (table.failure) std::cerr << "failure: " << *table.failure << '\n';
    for (const auto& c : table.criteria)
      std::cout << "criterion " << c.id << ' ' << (c.pass() ? "PASS" : "FAIL") << "  " << c.title << '\n';
    std::cout << "wrote " << config.out << " and " << json_path(config.out).string() << " (" << table.rows.size()
              << " rows, " << table.wall_seconds << " s)\n";
    return table.pass() ? 0 : kCriterionFailure;
  } catch (const geoint::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCriterionFailure;
  }
}
