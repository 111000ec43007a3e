#include "geoint/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "geoint/fit.hpp"
#include "geoint/hyperbolic.hpp"
#include "geoint/oscillatory.hpp"
#include "geoint/period_integrals.hpp"
#include "geoint/projector_kernels.hpp"
#include "geoint/windows.hpp"

namespace geoint {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<ExperimentInfo, 9> kCatalog{{
    {Experiment::Bounds, "bounds", "uniform bound on geodesic period integrals",
     "curve[index],j[index],lambda[1/length],a_j[-],abs_a_j[-]", "1,2,5"},
    {Experiment::Kuznecov, "kuznecov", "sum rule: linear growth of squared period integrals",
     "lambda[1/length],partial_sum[-],fitted[-],residual[-]", "3"},
    {Experiment::Restriction, "restriction", "restriction estimate along a geodesic",
     "l[index],lambda[1/length],family[0=highest-weight;1=zonal],norm[-],ratio[-]", "4"},
    {Experiment::KernelScaling, "kernel-scaling", "smoothed projector kernel asymptotics",
     "lambda[1/length],r[length],kernel[1/length^2],ratio[-],envelope[-]", "6,14"},
    {Experiment::Bilinear, "bilinear", "bilinear form over a geodesic and its window dependence",
     "setup[0=sphere;1=torus],lambda[1/length],T[length],form[-],pairing_sum[-],rel_error[-]", "7,9"},
    {Experiment::UnfoldTorus, "unfold-torus", "unfolding to the universal cover on the flat torus",
     "T[length],lambda[1/length],eigen_side[1/length^2],image_side[1/length^2],rel_error[-],"
     "zero_image_error[-],images[count]",
     "8"},
    {Experiment::StatPhase, "stat-phase", "stationary phase lemma for the model integrals",
     "case[0=no-critical;1=full-hessian;2=mixed-only],epsilon[-],lambda[1/length],abs_I[-],"
     "abs_inner[-],abs_outer[-]",
     "10"},
    {Experiment::HyperbolicLemma, "hyperbolic-lemma", "geometric lemma: critical points of the distance phase",
     "trial[index],word_length[count],displacement[length],critical_count[count],mixed[-],"
     "phase_value[length],oracle_value[length],abs_error[length]",
     "11,13"},
    {Experiment::NegCurvature, "neg-curvature", "model integrals on a negatively curved surface",
     "alpha[index;0=stabilizer],word_length[count],stabilizer[0/1],lambda[1/length],abs_I[-]", "12"},
}};

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const SchwartzWindow& shared_window() {
  static const SchwartzWindow w = make_window();
  return w;
}

const char* criterion_title(int id) {
  switch (id) {
    case 1: return "uniform bound on geodesic period integrals";
    case 2: return "uniform bound on a perturbed closed curve";
    case 3: return "sum rule: linear growth of the partial sums";
    case 4: return "restriction norms: saturation and contrast";
    case 5: return "flat torus: non-decaying resonant family";
    case 6: return "kernel asymptotics: lambda-stable constant";
    case 7: return "bilinear form equals the weighted pairing sum";
    case 8: return "flat torus unfolding over lattice images";
    case 9: return "bilinear form decreases in the window length";
    case 10: return "oscillatory integrals: decay by critical-point type";
    case 11: return "distance phase: critical points and angle defect";
    case 12: return "negative curvature: decay of the model integrals";
    case 13: return "Bolza group self-certification";
    case 14: return "window certification";
    default: return "";
  }
}

CriterionResult criterion(int id) { return {id, criterion_title(id), {}}; }

template <class F>
auto parallel_map(std::size_t n, F f) {
  using R = decltype(f(std::size_t{}));
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, f, i));
  std::vector<R> out;
  out.reserve(n);
  for (auto& fu : futures) out.push_back(fu.get());
  return out;
}

std::vector<double> grid_or(const ExperimentConfig& c, std::vector<double> fallback) {
  return c.grid.empty() ? fallback : c.grid;
}

SurfaceModel surface_of(SurfaceKind kind) { return kind == SurfaceKind::Sphere ? sphere() : flat_torus(); }

nlohmann::json fit_json(const DecayFit& f) {
  return {{"p", f.p}, {"C", f.C}, {"residual", f.residual}, {"used", f.used}, {"span", f.span}, {"valid", f.valid}};
}

nlohmann::json line_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"max_abs_residual", f.max_abs_residual}};
}

// ---------------------------------------------------------------- bounds

struct NamedCurve {
  std::string name;
  SurfaceCurve curve;
  std::optional<std::pair<double, double>> range;
};

std::vector<NamedCurve> bound_curves(SurfaceKind kind, const std::string& which) {
  std::vector<NamedCurve> all;
  if (kind == SurfaceKind::Sphere) {
    const double s3 = 1.0 / std::sqrt(3.0);
    all.push_back({"equator", great_circle({0, 0, 1}), std::nullopt});
    all.push_back({"tilted", great_circle({s3, s3, s3}), std::nullopt});
    all.push_back({"oblique", great_circle({0, std::sin(1.0), std::cos(1.0)}), std::nullopt});
    all.push_back({"perturbed", perturbed_equator(0.05), std::make_pair(0.0, 1.0)});
  } else {
    all.push_back({"axis", torus_line({0, 0, 0}, 1.0, 0.0), std::nullopt});
    all.push_back({"diagonal", torus_line({0, 0, 0}, 1.0, 1.0), std::nullopt});
  }
  if (which.empty() || which == "all") return all;
  for (auto& c : all)
    if (c.name == which) return {c};
  throw ConfigError("bounds: unknown case '" + which + "' for this surface");
}

ResultTable run_bounds(const ExperimentConfig& cfg) {
  const SurfaceKind kind = cfg.surface.value_or(SurfaceKind::Sphere);
  const double lambda_max = cfg.lambda_max.value_or(60.0);
  if (lambda_max < 8.0 || lambda_max > 200.0) throw ConfigError("bounds: lambda-max must lie in [8, 200]");
  const SurfaceModel surface = surface_of(kind);
  const auto curves = bound_curves(kind, cfg.case_name);
  const auto sweeps = parallel_map(curves.size(), [&](std::size_t i) {
    return bound_sweep(surface, curves[i].curve, lambda_max, nullptr, curves[i].range);
  });

  ResultTable t;
  t.columns = {{"curve", "index"}, {"j", "index"}, {"lambda", "1/length"}, {"a_j", "-"}, {"abs_a_j", "-"}};
  t.metadata.push_back({"surface", surface.name()});
  CriterionResult c1 = criterion(1), c2 = criterion(2), c5 = criterion(5);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& nc = curves[i];
    const auto& r = sweeps[i];
    t.metadata.push_back({"curve " + std::to_string(i), nc.name});
    for (const auto& rec : r.records)
      t.rows.push_back({double(i), double(rec.level_index), rec.lambda, rec.value, std::abs(rec.value)});
    nlohmann::json f = line_json(r.fit);
    f["max_abs"] = r.max_abs;
    f["constant_value"] = r.constant_value;
    f["max_over_constant"] = r.max_abs / r.constant_value;

    if (!nc.curve.is_geodesic) {
      c2.within(nc.name + " log-log slope", r.fit.slope, -0.1, 0.1);
    } else {
      c1.within(nc.name + " log-log slope", r.fit.slope, -0.1, 0.1);
      c1.at_most(nc.name + " max|a_j| / constant mode", r.max_abs / r.constant_value, 3.0);
    }
    if (nc.name == "equator") {
      double ref = 0.0, worst = INFINITY;
      for (const auto& s : r.levels)
        if (s.eigenspace == 20) ref = s.sup_value;
      for (const auto& s : r.levels)
        if (s.eigenspace >= 20 && s.eigenspace % 2 == 0) worst = std::min(worst, s.sup_value / ref);
      if (ref > 0.0) {
        f["even_zonal_min_ratio"] = worst;
        c1.at_least("equator even zonal / l=20 value", worst, 0.5);
      }
    }
    if (nc.name == "axis" && lambda_max >= 60.0) {
      // Modes constant along the axis: a_j = √2 for every k.
      const auto levels = enumerate_spectrum(surface, lambda_max);
      double worst = 0.0;
      int count = 0;
      for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& lab = levels[j].torus;
        if (lab.k1 == 0 && lab.k2 != 0 && std::abs(lab.k2) <= 60 && lab.mode == TorusMode::Cosine) {
          worst = std::max(worst, std::abs(r.records[j].value - std::sqrt(2.0)));
          ++count;
        }
      }
      f["resonant_family_size"] = count;
      f["resonant_family_max_error"] = worst;
      c5.at_most("max |a_j - sqrt 2| over the resonant family", worst, 1e-9);
      c5.within("resonant family size (k <= 60)", count, 60, 60);
    }
    t.fits[nc.name] = f;
  }
  for (auto* c : {&c1, &c2, &c5})
    if (!c->checks.empty()) t.criteria.push_back(*c);
  return t;
}

// -------------------------------------------------------------- kuznecov

ResultTable run_kuznecov(const ExperimentConfig& cfg) {
  const SurfaceKind kind = cfg.surface.value_or(SurfaceKind::Sphere);
  std::vector<double> grid{10, 20, 30, 40, 50, 60};
  if (!cfg.grid.empty()) {
    grid = cfg.grid;
  } else if (cfg.lambda_max) {
    for (int k = 1; k <= 6; ++k) grid[k - 1] = *cfg.lambda_max * k / 6.0;
  }
  if (grid.size() < 3) throw ConfigError("kuznecov: need at least 3 grid points");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("kuznecov: grid must be increasing");
  if (grid.back() > 200.0) throw ConfigError("kuznecov: lambda at most 200");
  const SurfaceModel surface = surface_of(kind);
  const SurfaceCurve curve = kind == SurfaceKind::Sphere ? great_circle({0, 0, 1}) : torus_line({0, 0, 0}, 1.0, 0.0);
  const auto sums = kuznecov_partial_sums(surface, curve, grid);
  const LineFit fit = fit_line(grid, sums);

  ResultTable t;
  t.columns = {{"lambda", "1/length"}, {"partial_sum", "-"}, {"fitted", "-"}, {"residual", "-"}};
  t.metadata.push_back({"surface", surface.name()});
  t.metadata.push_back({"curve", kind == SurfaceKind::Sphere ? "equator" : "axis"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.rows.push_back({grid[i], sums[i], fit.intercept + fit.slope * grid[i], fit.residuals[i]});
  t.fits["linear"] = line_json(fit);
  t.fits["residual_over_last"] = fit.max_abs_residual / sums.back();
  if (kind == SurfaceKind::Sphere) {
    CriterionResult c = criterion(3);
    c.at_least("R^2", fit.r_squared, 0.995);
    c.at_least("slope", fit.slope, 0.0);
    c.at_most("max residual / last partial sum", fit.max_abs_residual / sums.back(), 0.15);
    t.criteria.push_back(c);
  }
  return t;
}

// ----------------------------------------------------------- restriction

ResultTable run_restriction(const ExperimentConfig& cfg) {
  if (cfg.surface && *cfg.surface != SurfaceKind::Sphere) throw ConfigError("restriction: sphere only");
  std::vector<double> degrees = grid_or(cfg, {50, 100, 144, 200});
  for (double l : degrees)
    if (l < 1 || l > 400 || l != std::floor(l)) throw ConfigError("restriction: degrees must be integers in [1, 400]");
  if (degrees.size() < 2) throw ConfigError("restriction: need at least 2 degrees");
  const double top = *std::max_element(degrees.begin(), degrees.end());
  const auto levels = enumerate_spectrum(sphere(), std::sqrt(top * (top + 1)) + 0.5);
  auto find = [&](int l, int m) -> const EigenLevel& {
    for (const auto& e : levels)
      if (e.sphere.degree == l && e.sphere.order == m) return e;
    throw std::logic_error("restriction: level missing");
  };
  const SurfaceCurve eq = great_circle({0, 0, 1});

  ResultTable t;
  t.columns = {{"l", "index"}, {"lambda", "1/length"}, {"family", "0=highest-weight;1=zonal"}, {"norm", "-"}, {"ratio", "-"}};
  t.metadata.push_back({"curve", "equator, t in [0, 1]"});
  std::array<std::vector<double>, 2> ratios;
  for (int family = 0; family < 2; ++family)
    for (double ld : degrees) {
      const int l = static_cast<int>(ld);
      const auto& e = find(l, family == 0 ? l : 0);
      const double norm = restriction_norm(e, eq, 0.0, 1.0);
      const double ratio = norm / std::pow(e.lambda, 0.25);
      ratios[family].push_back(ratio);
      t.rows.push_back({ld, e.lambda, double(family), norm, ratio});
    }
  const auto [lo, hi] = std::minmax_element(ratios[0].begin(), ratios[0].end());
  const double variation = *hi / *lo - 1.0;
  const double drop = 1.0 - ratios[1].back() / ratios[1].front();
  t.fits["highest_weight_variation"] = variation;
  t.fits["zonal_drop"] = drop;
  CriterionResult c = criterion(4);
  c.at_most("highest-weight ratio variation", variation, 0.10);
  c.at_least("zonal ratio drop, first to last degree", drop, 0.50);
  t.criteria.push_back(c);
  return t;
}

// -------------------------------------------------------- kernel-scaling

// Riemann-sum transform of χ; χ is band-limited, so the coarse step aliases
// nothing below |ω| ≈ 49.
double chi_transform(const SchwartzWindow& w, double omega) {
  constexpr double half = 512.0, step = 1.0 / 16;
  const auto n = static_cast<long>(half / step);
  double sum = 0.0;
  for (long k = -n; k <= n; ++k) {
    const double tau = step * static_cast<double>(k);
    sum += w.chi(tau) * std::cos(omega * tau);
  }
  return sum * step;
}

CriterionResult window_certification(nlohmann::json& fits) {
  const auto& w = shared_window();
  double leak = 0.0;
  for (double omega : {0.55, 0.6, 0.75, 1.0, 2.0, 3.0}) leak = std::max(leak, std::abs(chi_transform(w, omega)));
  double partition = 0.0;
  for (double T : {2.0, 10.0}) {
    const auto d = derive_windows(w, make_beta(), T);
    for (double sigma : {0.0, 0.1, 1.0, 5.0, 20.0})
      partition = std::max(partition, std::abs(d.psi(sigma) + d.phi(sigma) - T * w.chi(T * sigma)));
  }
  const double norm = std::abs(w.rho(0.0) - 1.0);
  fits["chi_hat_leakage"] = leak;
  fits["rho_normalization_error"] = norm;
  fits["partition_error"] = partition;
  CriterionResult c = criterion(14);
  c.at_most("chi transform outside [-1/2, 1/2]", leak, 1e-8);
  c.at_most("|rho(0) - 1|", norm, 1e-10);
  c.at_most("partition identity error", partition, 1e-8);
  return c;
}

ResultTable run_kernel_scaling(const ExperimentConfig& cfg) {
  const SurfaceKind kind = cfg.surface.value_or(SurfaceKind::Sphere);
  const auto lambdas = grid_or(cfg, {40, 80, 160});
  for (double l : lambdas)
    if (l < 5 || l > 400) throw ConfigError("kernel-scaling: lambda must lie in [5, 400]");
  const std::vector<double> radii{0.3, 0.6, 0.9};
  const auto r = kernel_scaling_check(surface_of(kind), shared_window(), lambdas, radii);

  ResultTable t;
  t.columns = {{"lambda", "1/length"}, {"r", "length"}, {"kernel", "1/length^2"}, {"ratio", "-"}, {"envelope", "-"}};
  t.metadata.push_back({"surface", surface_of(kind).name()});
  for (const auto& row : r.rows) t.rows.push_back({row.lambda, row.r, row.kernel, row.ratio, row.envelope});
  t.fits["constant_by_lambda"] = r.constant_by_lambda;
  t.fits["diagonal_by_lambda"] = r.diagonal_by_lambda;
  t.fits["spread"] = r.spread;
  t.fits["diagonal_spread"] = r.diagonal_spread;
  CriterionResult c = criterion(6);
  c.at_most("max/min of the constant across lambda", r.spread, 3.0);
  c.at_most("max/min of diagonal/lambda", r.diagonal_spread, 2.0);
  t.criteria.push_back(c);
  t.criteria.push_back(window_certification(t.fits));
  return t;
}

// -------------------------------------------------------------- bilinear

ResultTable run_bilinear(const ExperimentConfig& cfg) {
  const auto lambdas = grid_or(cfg, {20, 40});
  for (double l : lambdas)
    if (l < 1 || l > 120) throw ConfigError("bilinear: lambda must lie in [1, 120]");
  const double sphere_T = cfg.T.value_or(1.0);
  const double torus_lambda = cfg.lambda_max.value_or(40.0);
  if (torus_lambda < 1 || torus_lambda > 120) throw ConfigError("bilinear: lambda-max must lie in [1, 120]");
  const auto& w = shared_window();
  const auto b = TestWindowB::bump(0.0, 0.5);
  const SurfaceCurve eq = great_circle({0, 0, 1});
  const SurfaceCurve line = torus_line({0, 0, 0}, 1.0, std::numbers::phi);

  struct Job {
    int setup;
    double lambda, T;
  };
  std::vector<Job> jobs;
  for (double l : lambdas) jobs.push_back({0, l, sphere_T});
  for (double T : {2.0, 4.0, 8.0}) jobs.push_back({1, torus_lambda, T});
  const auto values = parallel_map(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const SurfaceModel s = j.setup == 0 ? sphere() : flat_torus();
    const SurfaceCurve& c = j.setup == 0 ? eq : line;
    return std::make_pair(bilinear_geodesic_form(s, w, j.lambda, c, b, j.T),
                          weighted_pairing_sum(s, w, j.lambda, c, b, j.T));
  });

  ResultTable t;
  t.columns = {{"setup", "0=sphere;1=torus"}, {"lambda", "1/length"}, {"T", "length"},
               {"form", "-"}, {"pairing_sum", "-"}, {"rel_error", "-"}};
  t.metadata.push_back({"setup 0", "sphere equator, b = bump(0, 0.5)"});
  t.metadata.push_back({"setup 1", "torus line of golden slope, b = bump(0, 0.5)"});
  double worst = 0.0, worst_ratio = 0.0;
  std::vector<double> torus_forms;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [form, sum] = values[i];
    const double rel = std::abs(form - sum) / std::abs(sum);
    t.rows.push_back({double(jobs[i].setup), jobs[i].lambda, jobs[i].T, form, sum, rel});
    if (jobs[i].setup == 0) worst = std::max(worst, rel);
    else torus_forms.push_back(form);
  }
  for (std::size_t k = 1; k < torus_forms.size(); ++k)
    worst_ratio = std::max(worst_ratio, torus_forms[k] / torus_forms[k - 1]);
  t.fits["max_relative_error"] = worst;
  t.fits["torus_forms"] = torus_forms;
  t.fits["max_consecutive_ratio"] = worst_ratio;
  CriterionResult c7 = criterion(7), c9 = criterion(9);
  c7.at_most("max relative error, form vs pairing sum", worst, 1e-8);
  c9.at_most("max form(T_next) / form(T) over T = 2, 4, 8", worst_ratio, 1.0 - 1e-12);
  t.criteria = {c7, c9};
  return t;
}

// ---------------------------------------------------------- unfold-torus

ResultTable run_unfold(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> cases{{5, 40}, {8, 40}, {5, 80}};
  if (cfg.T || cfg.lambda_max) cases = {{cfg.T.value_or(5.0), cfg.lambda_max.value_or(40.0)}};
  for (auto [T, l] : cases) {
    if (T < 1 || T > 20) throw ConfigError("unfold-torus: T must lie in [1, 20]");
    if (l < 1 || l > 200) throw ConfigError("unfold-torus: lambda must lie in [1, 200]");
  }
  // Points near opposite edges of the fundamental square, so the nearest
  // image is not the m = 0 one.
  const Vec3 x{5.5, 0.4, 0.0}, y{0.3, 0.2, 0.0};
  const auto& w = shared_window();
  ResultTable t;
  t.columns = {{"T", "length"}, {"lambda", "1/length"}, {"eigen_side", "1/length^2"}, {"image_side", "1/length^2"},
               {"rel_error", "-"}, {"zero_image_error", "-"}, {"images", "count"}};
  t.metadata.push_back({"points", "x = (5.5, 0.4), y = (0.3, 0.2)"});
  CriterionResult c = criterion(8);
  for (auto [T, l] : cases) {
    const auto full = torus_unfolding_check(w, T, l, x, y);
    const auto zero = torus_unfolding_check(w, T, l, x, y, true);
    t.rows.push_back({T, l, full.eigen_side, full.image_side, full.relative_error, zero.relative_error,
                      double(full.images)});
    const std::string tag = "(T=" + fmt(T) + ", lambda=" + fmt(l) + ")";
    c.at_most("relative error " + tag, full.relative_error, 1e-6);
    c.at_least("zero-image degradation " + tag, zero.relative_error / std::max(full.relative_error, 1e-300), 10.0);
  }
  t.criteria.push_back(c);
  return t;
}

// ------------------------------------------------------------ stat-phase

ResultTable run_stat_phase(const ExperimentConfig& cfg) {
  const std::string which = cfg.case_name.empty() ? "all" : cfg.case_name;
  const std::array<std::string, 3> names{"none", "full", "mixed"};
  std::vector<int> cases;
  for (int k = 0; k < 3; ++k)
    if (which == "all" || which == names[k]) cases.push_back(k);
  if (cases.empty()) throw ConfigError("stat-phase: case must be none, full, mixed or all");
  const std::vector<double> fast{20, 30, 45, 70, 100, 160}, wide{50, 100, 200, 400, 800};
  auto grid_for = [&](int k) { return grid_or(cfg, k == 0 ? fast : wide); };
  for (int k : cases) {
    const auto g = grid_for(k);
    if (g.size() < 5 || *std::min_element(g.begin(), g.end()) < 20 || *std::max_element(g.begin(), g.end()) > 2000)
      throw ConfigError("stat-phase: grid needs at least 5 values in [20, 2000]");
  }
  auto problem = [](int k) {
    return k == 0 ? canonical_no_critical() : k == 1 ? canonical_full_hessian() : canonical_mixed_only();
  };
  const std::vector<double> epsilons{0.4, 0.2, 0.1};
  const bool split = std::find(cases.begin(), cases.end(), 2) != cases.end();

  // One task per decay fit, plus the ε-split table.
  auto fits = parallel_map(cases.size(), [&](std::size_t i) { return decay_fit(problem(cases[i]), grid_for(cases[i])); });
  std::optional<EpsilonSplitTable> table;
  if (split) table = epsilon_split_check(problem(2), epsilons, grid_for(2));

  ResultTable t;
  t.columns = {{"case", "0=no-critical;1=full-hessian;2=mixed-only"}, {"epsilon", "-"}, {"lambda", "1/length"},
               {"abs_I", "-"}, {"abs_inner", "-"}, {"abs_outer", "-"}};
  t.metadata.push_back({"epsilon 0", "no cutoff: inner = 0, outer = I"});
  CriterionResult c = criterion(10);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const int k = cases[i];
    const DecayFit& f = fits[i];
    for (std::size_t j = 0; j < f.lambdas.size(); ++j)
      t.rows.push_back({double(k), 0.0, f.lambdas[j], f.magnitudes[j], 0.0, f.magnitudes[j]});
    nlohmann::json fj = fit_json(f);
    const auto cls = classify_phase(problem(k));
    fj["class"] = phase_class_name(cls.kind);
    double scaled_sup = 0.0;
    for (std::size_t j = 0; j < f.lambdas.size(); ++j)
      scaled_sup = std::max(scaled_sup, std::sqrt(f.lambdas[j]) * f.magnitudes[j]);
    const double scaled_first = std::sqrt(f.lambdas.front()) * f.magnitudes.front();
    fj["scaled_sup"] = scaled_sup;
    if (k == 0) {
      c.at_least("no-critical p", f.p, 1.8);
      c.at_least("no-critical fit valid", f.valid, 1);
    } else if (k == 1) {
      // 2π |det H|^{-1/2} a(t₀, s₀).
      const auto pr = problem(1);
      const double predicted = 2 * kPi * pr.amplitude(cls.t0, cls.s0) / std::sqrt(std::abs(cls.jet.hessian_det()));
      fj["predicted_C"] = predicted;
      c.within("full-hessian p", f.p, 0.9, 1.1);
      c.at_most("full-hessian |C / prediction - 1|", std::abs(f.C / predicted - 1.0), 0.15);
    } else {
      const bool finite = std::isfinite(scaled_sup);
      fj["scaled_sup_finite"] = finite;
      fj["scaled_growth"] = scaled_sup / scaled_first;
      c.at_least("mixed-only p", f.p, 0.5);
      c.at_most("mixed-only sup lambda^1/2|I| / value at the first lambda", scaled_sup / scaled_first, 2.0);
    }
    t.fits[names[k]] = fj;
  }
  if (table) {
    for (const auto& row : table->rows)
      t.rows.push_back({2.0, row.epsilon, row.lambda, row.full, row.inner, row.outer});
    nlohmann::json sj;
    double min_p = INFINITY;
    std::vector<nlohmann::json> outer;
    for (const auto& f : table->outer_fits) {
      outer.push_back(fit_json(f));
      // Same rule as the table: a part that vanished on the whole grid decays
      // trivially, points under the floor are dropped, two are enough.
      if (f.used > 0) min_p = std::min(min_p, f.used >= 2 ? f.p : 0.0);
    }
    sj["epsilons"] = table->epsilons;
    sj["outer_fits"] = outer;
    sj["inner_scaled_sup"] = table->inner_scaled_sup;
    sj["slope_A"] = table->slope_A;
    sj["max_relative_deviation"] = table->max_relative_deviation;
    sj["outer_decay_ok"] = table->outer_decay_ok;
    sj["linear_trend_ok"] = table->linear_trend_ok;
    t.fits["epsilon_split"] = sj;
    c.at_least("epsilon-split min outer p", min_p, 0.9);
    c.at_most("epsilon-split deviation from A*epsilon", table->max_relative_deviation, 0.5);
  }
  t.criteria.push_back(c);
  return t;
}

// ------------------------------------------------------ hyperbolic-lemma

struct GridMin {
  double t = 0, s = 0, value = INFINITY;
};

// Dense 512² grid with three zoomed 64² refinements.
GridMin grid_minimum(const PhaseFunction& phi) {
  double t0 = -0.5, t1 = 0.5, s0 = -0.5, s1 = 0.5;
  GridMin best;
  for (int round = 0; round < 4; ++round) {
    const int m = round == 0 ? 512 : 64;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double t = t0 + (t1 - t0) * a / (m - 1), s = s0 + (s1 - s0) * b / (m - 1);
        const double v = phi(t, s);
        if (v < best.value) best = {t, s, v};
      }
    const double ht = 2.0 * (t1 - t0) / (m - 1), hs = 2.0 * (s1 - s0) / (m - 1);
    t0 = best.t - ht, t1 = best.t + ht, s0 = best.s - hs, s1 = best.s + hs;
  }
  return best;
}

double log_count_slope(const FuchsianGroup& g, nlohmann::json& fits) {
  const std::vector<double> ts{4, 6, 8, 10};
  std::vector<double> counts;
  for (double T : ts) counts.push_back(double(enumerate_deck(g, T).size()));
  std::vector<double> logs;
  for (double n : counts) logs.push_back(std::log(n));
  fits["ball_counts"] = counts;
  return fit_line(ts, logs).slope;
}

ResultTable run_hyperbolic_lemma(const ExperimentConfig& cfg) {
  const double T = cfg.T.value_or(8.0);
  if (T < 3.1 || T > 12) throw ConfigError("hyperbolic-lemma: T must lie in [3.1, 12]");
  const FuchsianGroup g = bolza_group();
  const auto ball = enumerate_deck(g, T);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(1, ball.size() - 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  ResultTable t;
  t.columns = {{"trial", "index"}, {"word_length", "count"}, {"displacement", "length"}, {"critical_count", "count"},
               {"mixed", "-"}, {"phase_value", "length"}, {"oracle_value", "length"}, {"abs_error", "length"}};
  t.metadata.push_back({"pairs", "50; gamma through a random point, every other one nearly orthogonal to the axis of alpha"});
  t.metadata.push_back({"no critical point", "mixed, phase_value, oracle_value and abs_error are 0"});
  std::size_t max_count = 0;
  int found = 0, rejected = 0;
  double min_mixed = INFINITY, max_error = 0.0;
  for (int trial = 0; trial < 50;) {
    const DeckTransform& alpha = ball[pick(rng)];
    HGeodesic gam = HGeodesic::through(HPoint::polar(std::abs(u(rng)), 3 * u(rng)), 3 * u(rng));
    const auto axis = translation_axis(alpha);
    if (trial % 2 == 0 && axis) {
      const double at = 0.3 * u(rng), tilt = 0.3 * u(rng);
      const HVec n = axis->plane_normal(), v = axis->velocity(at);
      gam.base = (*axis)(at).x;
      for (int i = 0; i < 3; ++i) gam.tangent[i] = std::cos(tilt) * n[i] + std::sin(tilt) * v[i];
    }
    const PhaseFunction phi(gam, alpha, gam);
    if (stabilizer_test(alpha, gam, std::max(alpha.translation_length(), 1e-3)).shift || min_separation(phi) < 1e-2) {
      ++rejected;
      continue;
    }
    const auto cps = find_critical_points(phi);
    max_count = std::max(max_count, cps.size());
    std::vector<double> row{double(trial), double(alpha.word.size()), alpha.displacement, double(cps.size()), 0, 0, 0, 0};
    if (!cps.empty()) {
      ++found;
      const GridMin m = grid_minimum(phi);
      const auto& cp = cps.front();
      row[4] = cp.mixed, row[5] = cp.value, row[6] = m.value, row[7] = std::abs(cp.value - m.value);
      min_mixed = std::min(min_mixed, std::abs(cp.mixed));
      max_error = std::max(max_error, row[7]);
    }
    t.rows.push_back(row);
    ++trial;
  }

  std::uniform_real_distribution<double> radius(0.1, 2.5), jitter(-0.6, 0.6);
  int quads = 0, positive = 0, degenerate = 0;
  while (quads < 100) {
    std::array<HPoint, 4> v;
    for (int k = 0; k < 4; ++k) v[k] = HPoint::polar(radius(rng), k * kPi / 2 + jitter(rng));
    try {
      positive += quadrilateral_angle_defect(v[0], v[1], v[2], v[3]) > 0.0;
      ++quads;
    } catch (const std::invalid_argument&) {
      ++degenerate;
    }
  }

  t.fits["pairs_with_critical_point"] = found;
  t.fits["rejected_samples"] = rejected;
  t.fits["max_critical_count"] = max_count;
  t.fits["min_abs_mixed"] = found ? min_mixed : 0.0;
  t.fits["max_oracle_error"] = max_error;
  t.fits["quadrilaterals_positive"] = positive;
  t.fits["quadrilaterals_rejected"] = degenerate;
  CriterionResult c11 = criterion(11);
  c11.at_most("max critical-point count", double(max_count), 1.0);
  if (found) c11.at_least("min |mixed derivative| at critical points", min_mixed, 1e-8);
  c11.at_most("max |phase value - grid oracle|", max_error, 1e-6);
  c11.within("quadrilaterals with positive defect (of 100)", positive, 100, 100);

  const double residual = g.relation_residual();
  const double min_disp = minimum_displacement(enumerate_deck(g, 4.0));
  const auto closure = enumeration_closure(g, 6.0);
  const double slope = log_count_slope(g, t.fits);
  t.fits["relation_residual"] = residual;
  t.fits["vertex_relation_residual"] = g.vertex_relation_residual();
  t.fits["minimum_displacement"] = min_disp;
  t.fits["closure_word_length"] = closure.word_length;
  t.fits["closure_count"] = closure.count;
  t.fits["log_count_slope"] = slope;
  CriterionResult c13 = criterion(13);
  c13.at_most("commutator relation residual", residual, 1e-7);
  c13.within("minimum nontrivial displacement", min_disp, 3.05, 3.07);
  c13.at_least("closure at T = 6 stable", closure.stable, 1);
  c13.within("log-count slope over T = 4..10", slope, 0.7, 1.3);
  t.criteria = {c11, c13};
  return t;
}

// --------------------------------------------------------- neg-curvature

ResultTable run_neg_curvature(const ExperimentConfig& cfg) {
  const auto grid = grid_or(cfg, {20, 30, 45, 70, 100, 160});
  if (grid.size() < 5 || *std::min_element(grid.begin(), grid.end()) < 20 ||
      *std::max_element(grid.begin(), grid.end()) > 2000)
    throw ConfigError("neg-curvature: grid needs at least 5 values in [20, 2000]");
  const FuchsianGroup g = bolza_group();
  const HGeodesic axis{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  const double period = g.side_pairing_length;
  std::vector<DeckTransform> alphas{g.generators[0]};
  for (const auto& a : enumerate_deck(g, 8.0)) {
    if (alphas.size() == 11) break;
    if (a.is_identity() || stabilizer_test(a, axis, period).shift) continue;
    alphas.push_back(a);
  }
  const auto b = TestWindowB::bump(0.0, 0.5);
  const KernelAmplitudeModel model{100.0, 1.0};
  const auto fits = parallel_map(alphas.size(), [&](std::size_t i) {
    return decay_fit(negative_curvature_problem(axis, alphas[i], b, b, model), grid);
  });

  ResultTable t;
  t.columns = {{"alpha", "index;0=stabilizer"}, {"word_length", "count"}, {"stabilizer", "0/1"}, {"lambda", "1/length"},
               {"abs_I", "-"}};
  t.metadata.push_back({"geodesic", "lift of the closed geodesic along the x1 axis through the basepoint"});
  t.metadata.push_back({"amplitude", "bump(0, 0.5) x bump(0, 0.5) x d^(-1/2)"});
  CriterionResult c = criterion(12);
  int valid = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const DecayFit& f = fits[i];
    for (std::size_t j = 0; j < f.lambdas.size(); ++j)
      t.rows.push_back({double(i), double(alphas[i].word.size()), i == 0 ? 1.0 : 0.0, f.lambdas[j], f.magnitudes[j]});
    t.metadata.push_back({"alpha " + std::to_string(i), alphas[i].word});
    nlohmann::json fj = fit_json(f);
    fj["stabilizer"] = i == 0;
    t.fits[alphas[i].word] = fj;
    valid += f.valid;
    c.at_least((i == 0 ? "stabilizer " : "") + alphas[i].word + " p", f.p, i == 0 ? 0.9 : 0.45);
  }
  c.at_least("valid fits (of 11)", valid, 11);
  t.criteria.push_back(c);
  return t;
}

void require_finite(ResultTable& t) {
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != t.columns.size())
      throw std::logic_error("row " + std::to_string(i) + " does not match the schema");
    for (double v : t.rows[i])
      if (!std::isfinite(v)) throw std::runtime_error("non-finite value in row " + std::to_string(i));
  }
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::span<const ExperimentInfo> list_experiments() { return kCatalog; }

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& e : kCatalog)
    if (e.command == name) return e.id;
  return std::nullopt;
}

std::string_view experiment_name(Experiment e) {
  for (const auto& info : kCatalog)
    if (info.id == e) return info.command;
  return "";
}

void ExperimentConfig::validate() const {
  if (lambda_max && !(*lambda_max >= 1.0 && *lambda_max <= kMaxOscillatoryLambda))
    throw ConfigError("lambda-max must lie in [1, 2000]");
  for (double v : grid)
    if (!(v > 0.0 && v <= kMaxOscillatoryLambda)) throw ConfigError("grid values must lie in (0, 2000]");
  if (T && !(*T > 0.0 && *T <= 25.0)) throw ConfigError("T must lie in (0, 25]");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::string g;
  for (std::size_t i = 0; i < grid.size(); ++i) g += (i ? "," : "") + fmt(grid[i]);
  return {
      {"experiment", std::string(experiment_name(experiment))},
      {"lambda-max", lambda_max ? fmt(*lambda_max) : "default"},
      {"grid", grid.empty() ? "default" : g},
      {"T", T ? fmt(*T) : "default"},
      {"surface", surface ? (*surface == SurfaceKind::Sphere ? "sphere" : "torus") : "default"},
      {"seed", std::to_string(seed)},
      {"case", case_name.empty() ? "default" : case_name},
  };
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size())
      throw ConfigError("grid: cannot parse '" + std::string(item) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  auto number = [&]() {
    double v = 0.0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || r.ec != std::errc() || r.ptr != value.data() + value.size())
      throw ConfigError(std::string(key) + ": not a number: '" + std::string(value) + "'");
    return v;
  };
  if (key == "experiment") {
    const auto e = parse_experiment(value);
    if (!e) throw ConfigError("unknown experiment '" + std::string(value) + "'");
    c.experiment = *e;
  } else if (key == "lambda-max") {
    c.lambda_max = number();
  } else if (key == "grid") {
    c.grid = parse_grid(value);
  } else if (key == "T") {
    c.T = number();
  } else if (key == "surface") {
    if (value == "sphere") c.surface = SurfaceKind::Sphere;
    else if (value == "torus") c.surface = SurfaceKind::FlatTorus;
    else throw ConfigError("surface must be sphere or torus");
  } else if (key == "seed") {
    std::uint64_t v = 0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || r.ec != std::errc() || r.ptr != value.data() + value.size())
      throw ConfigError("seed must be a nonnegative integer");
    c.seed = v;
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "case") {
    c.case_name = std::string(value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& c, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key=value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

bool CriterionResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.pass; });
}

void CriterionResult::within(std::string name, double value, double lower, double upper) {
  checks.push_back({std::move(name), value, lower, upper, value >= lower && value <= upper});
}

void CriterionResult::at_most(std::string name, double value, double upper) {
  within(std::move(name), value, -std::numeric_limits<double>::infinity(), upper);
}

void CriterionResult::at_least(std::string name, double value, double lower) {
  within(std::move(name), value, lower, std::numeric_limits<double>::infinity());
}

bool ResultTable::pass() const {
  return !failure && std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
}

ResultTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ResultTable t;
  try {
    switch (config.experiment) {
      case Experiment::Bounds: t = run_bounds(config); break;
      case Experiment::Kuznecov: t = run_kuznecov(config); break;
      case Experiment::Restriction: t = run_restriction(config); break;
      case Experiment::KernelScaling: t = run_kernel_scaling(config); break;
      case Experiment::Bilinear: t = run_bilinear(config); break;
      case Experiment::UnfoldTorus: t = run_unfold(config); break;
      case Experiment::StatPhase: t = run_stat_phase(config); break;
      case Experiment::HyperbolicLemma: t = run_hyperbolic_lemma(config); break;
      case Experiment::NegCurvature: t = run_neg_curvature(config); break;
    }
    require_finite(t);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    t.rows.clear();
    t.criteria.clear();
    t.failure = e.what();
  }
  t.experiment = config.experiment;
  auto meta = config.echo();
  meta.emplace_back("version", std::string(kLibraryVersion));
  meta.insert(meta.end(), t.metadata.begin(), t.metadata.end());
  t.metadata = std::move(meta);
  t.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

void write_csv(const ResultTable& t, std::ostream& out) {
  for (const auto& [k, v] : t.metadata) out << "# " << k << ": " << v << '\n';
  if (t.failure) out << "# failure: " << *t.failure << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i].name << '[' << t.columns[i].unit << ']';
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
}

nlohmann::json summary_json(const ResultTable& t) {
  nlohmann::json j;
  j["experiment"] = experiment_name(t.experiment);
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["rows"] = t.rows.size();
  j["fits"] = t.fits;
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : t.criteria) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& k : c.checks)
      checks.push_back({{"name", k.name},
                        {"value", number_or_null(k.value)},
                        {"lower", number_or_null(k.lower)},
                        {"upper", number_or_null(k.upper)},
                        {"pass", k.pass}});
    crit.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"checks", checks}});
  }
  j["criteria"] = crit;
  j["failure"] = t.failure ? nlohmann::json(*t.failure) : nlohmann::json(nullptr);
  j["pass"] = t.pass();
  j["wall_seconds"] = t.wall_seconds;
  return j;
}

std::vector<CriterionResult> merge_criteria(std::span<const ResultTable> tables) {
  std::map<int, CriterionResult> by_id;
  for (const auto& t : tables)
    for (const auto& c : t.criteria) {
      auto [it, fresh] = by_id.try_emplace(c.id, criterion(c.id));
      it->second.checks.insert(it->second.checks.end(), c.checks.begin(), c.checks.end());
    }
  std::vector<CriterionResult> out;
  for (auto& [id, c] : by_id) out.push_back(std::move(c));
  return out;
}

}  // namespace geoint
