#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geoint/surfaces.hpp"

namespace geoint {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

enum class Experiment {
  Bounds,
  Kuznecov,
  Restriction,
  KernelScaling,
  Bilinear,
  UnfoldTorus,
  StatPhase,
  HyperbolicLemma,
  NegCurvature,
};

struct ExperimentInfo {
  Experiment id;
  std::string_view command;
  std::string_view anchor;    // the claim the experiment exercises
  std::string_view columns;   // CSV schema, name[unit]
  std::string_view criteria;  // acceptance criteria it reports on
};

std::span<const ExperimentInfo> list_experiments();
std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

/// Bad configuration; the CLI maps this to exit status 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unset optionals fall back to per-experiment defaults.
struct ExperimentConfig {
  Experiment experiment = Experiment::Bounds;
  std::optional<double> lambda_max;
  std::vector<double> grid;
  std::optional<double> T;
  std::optional<SurfaceKind> surface;
  std::uint64_t seed = 1;
  std::string out;
  std::string case_name;

  /// Throws ConfigError for values outside the documented ranges.
  void validate() const;
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Applies one key=value setting; keys match the long flag names.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Plain key=value lines; '#' starts a comment.
void apply_config_text(ExperimentConfig& config, std::string_view text);

std::vector<double> parse_grid(std::string_view text);

/// One measured quantity against its acceptance interval [lower, upper].
struct Check {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;

  bool pass() const;
  void at_most(std::string name, double value, double upper);
  void at_least(std::string name, double value, double lower);
  void within(std::string name, double value, double lower, double upper);
};

struct Column {
  std::string name;
  std::string unit;
};

struct ResultTable {
  Experiment experiment = Experiment::Bounds;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  nlohmann::json fits = nlohmann::json::object();
  std::vector<CriterionResult> criteria;
  std::optional<std::string> failure;
  double wall_seconds = 0.0;

  bool pass() const;
};

/// Deterministic in (config, seed). Numerical failures are recorded in
/// `failure` rather than thrown; ConfigError propagates.
ResultTable run_experiment(const ExperimentConfig& config);

/// `#` metadata block, schema row, data rows. No wall time, so reruns are
/// byte-identical.
void write_csv(const ResultTable& table, std::ostream& out);

nlohmann::json summary_json(const ResultTable& table);

/// Combines the partial reports of one criterion from several runs.
std::vector<CriterionResult> merge_criteria(std::span<const ResultTable> tables);

}  // namespace geoint
