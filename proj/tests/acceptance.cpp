// Runs every experiment with its default configuration and prints one
// pass/fail line per acceptance criterion, followed by the individual checks.
#include <cmath>
#include <cstdio>
#include <vector>

#include "geoint/experiments.hpp"

using namespace geoint;

namespace {

std::string bound_text(const Check& k) {
  char buf[96];
  if (std::isinf(k.lower)) std::snprintf(buf, sizeof buf, "<= %.3g", k.upper);
  else if (std::isinf(k.upper)) std::snprintf(buf, sizeof buf, ">= %.3g", k.lower);
  else std::snprintf(buf, sizeof buf, "in [%.3g, %.3g]", k.lower, k.upper);
  return buf;
}

}  // namespace

int main() {
  std::vector<ExperimentConfig> runs;
  for (const auto& e : list_experiments()) {
    ExperimentConfig c;
    c.experiment = e.id;
    runs.push_back(c);
  }
  ExperimentConfig torus;
  torus.experiment = Experiment::Bounds;
  torus.surface = SurfaceKind::FlatTorus;
  runs.push_back(torus);

  std::vector<ResultTable> tables;
  bool ok = true;
  for (const auto& c : runs) {
    tables.push_back(run_experiment(c));
    const auto& t = tables.back();
    std::printf("ran %-16s %6.1f s\n", std::string(experiment_name(c.experiment)).c_str(), t.wall_seconds);
    if (t.failure) {
      std::printf("  failure: %s\n", t.failure->c_str());
      ok = false;
    }
  }

  const auto criteria = merge_criteria(tables);
  int passed = 0;
  for (int id = 1; id <= 14; ++id) {
    const CriterionResult* found = nullptr;
    for (const auto& c : criteria)
      if (c.id == id) found = &c;
    if (!found) {
      std::printf("criterion %2d FAIL  (not reported)\n", id);
      ok = false;
      continue;
    }
    const bool pass = found->pass();
    passed += pass;
    ok = ok && pass;
    std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", found->title.c_str());
    for (const auto& k : found->checks)
      std::printf("    [%s] %s = %.6g  (%s)\n", k.pass ? "ok" : "!!", k.name.c_str(), k.value, bound_text(k).c_str());
  }
  std::printf("%d/14 criteria pass\n", passed);
  return ok ? 0 : 1;
}
