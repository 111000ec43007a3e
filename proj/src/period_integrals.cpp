#include "geoint/period_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geoint/windows.hpp"

namespace geoint {

TestWindowB::TestWindowB(std::function<double(double)> f, double lo, double hi)
    : f_(std::move(f)), lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw std::invalid_argument("TestWindowB: empty support");
  if (lo < -0.5 - 1e-15 || hi > 0.5 + 1e-15)
    throw std::invalid_argument("TestWindowB: support must lie in [-1/2, 1/2]");
}

double TestWindowB::operator()(double t) const {
  if (zero_ || t < lo_ || t > hi_) return 0.0;
  return f_(t);
}

TestWindowB TestWindowB::zero() {
  TestWindowB b([](double) { return 0.0; }, 0.0, 0.0);
  b.zero_ = true;
  return b;
}

TestWindowB TestWindowB::bump(double center, double radius, double height) {
  if (!(radius > 0.0)) throw std::invalid_argument("TestWindowB::bump: radius must be positive");
  return TestWindowB(
      [center, radius, height](double t) { return height * unit_bump(t - center, radius); },
      center - radius, center + radius);
}

QuadratureRule oscillatory_rule(double t0, double t1, double frequency, std::size_t min_panels) {
  const std::size_t panels = panels_for_frequency(t1 - t0, frequency + 1.0, 8.0, 16, min_panels);
  return composite_gauss_legendre(t0, t1, panels, 16);
}

std::vector<double> period_integrals_all(std::span<const EigenLevel> levels,
                                         const SurfaceCurve& curve, double t0, double t1,
                                         const TestWindowB* b) {
  std::vector<double> out(levels.size(), 0.0);
  if (levels.empty()) return out;
  if (b) {
    if (b->is_zero()) return out;
    t0 = std::max(t0, b->lo());
    t1 = std::min(t1, b->hi());
  }
  if (!(t1 > t0)) return out;
  double lambda_max = 0.0;
  int lmax = 0;
  for (const auto& e : levels) {
    lambda_max = std::max(lambda_max, e.lambda);
    lmax = std::max(lmax, e.sphere.degree);
  }
  // Bump weights need extra panels near their flat edges.
  const QuadratureRule rule = oscillatory_rule(t0, t1, lambda_max, b ? 16 : 4);
  std::vector<double> harmonics;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    double w = rule.weights[i];
    if (b) w *= (*b)(t);
    if (w == 0.0) continue;
    const Vec3 p = curve(t);
    if (curve.kind == SurfaceKind::Sphere) {
      spherical_harmonics_all(lmax, p, harmonics);
      for (std::size_t j = 0; j < levels.size(); ++j) {
        const int l = levels[j].sphere.degree, m = levels[j].sphere.order;
        out[j] += w * harmonics[static_cast<std::size_t>(l * l + l + m)];
      }
    } else {
      for (std::size_t j = 0; j < levels.size(); ++j) out[j] += w * eval_eigenfunction(levels[j], p);
    }
  }
  return out;
}

double period_integral(const EigenLevel& level, const SurfaceCurve& curve, double t0, double t1) {
  return period_integrals_all(std::span<const EigenLevel>(&level, 1), curve, t0, t1).front();
}

double windowed_pairing(const EigenLevel& level, const SurfaceCurve& curve, const TestWindowB& b) {
  return period_integrals_all(std::span<const EigenLevel>(&level, 1), curve, b.lo(), b.hi(), &b)
      .front();
}

std::vector<double> kuznecov_partial_sums(const SurfaceModel& surface, const SurfaceCurve& curve,
                                          std::span<const double> lambdas) {
  if (!curve.periodic) throw std::invalid_argument("kuznecov_sum: curve is not periodic");
  if (lambdas.empty()) return {};
  const double top = *std::max_element(lambdas.begin(), lambdas.end());
  const auto levels = enumerate_spectrum(surface, top);
  const auto values = period_integrals_all(levels, curve, 0.0, curve.length);
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    double sum = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j)
      if (levels[j].lambda <= lambda) sum += values[j] * values[j];
    out.push_back(sum);
  }
  return out;
}

double kuznecov_sum(const SurfaceModel& surface, const SurfaceCurve& curve, double lambda) {
  const double l[] = {lambda};
  return kuznecov_partial_sums(surface, curve, l).front();
}

double restriction_norm(const EigenLevel& level, const SurfaceCurve& curve, double t0, double t1) {
  if (std::abs((t1 - t0) - 1.0) > 1e-12)
    throw std::invalid_argument("restriction_norm: range must have unit length");
  const QuadratureRule rule = oscillatory_rule(t0, t1, 2.0 * level.lambda);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = eval_eigenfunction(level, curve(rule.nodes[i]));
    sum += rule.weights[i] * v * v;
  }
  return std::sqrt(sum);
}

BoundSweepResult bound_sweep(const SurfaceModel& surface, const SurfaceCurve& curve,
                             double lambda_max, const TestWindowB* b,
                             std::optional<std::pair<double, double>> range) {
  if (surface.kind != curve.kind) throw std::invalid_argument("bound_sweep: curve is on another surface");
  double t0 = 0.0, t1 = curve.length;
  if (range) {
    t0 = range->first;
    t1 = range->second;
  } else if (!curve.periodic) {
    throw std::invalid_argument("bound_sweep: non-periodic curve needs a range");
  }
  const auto levels = enumerate_spectrum(surface, lambda_max);
  const auto values = period_integrals_all(levels, curve, t0, t1, b);

  BoundSweepResult result;
  result.records.reserve(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) {
    result.records.push_back({levels[j].index, levels[j].lambda, values[j]});
    result.max_abs = std::max(result.max_abs, std::abs(values[j]));
  }
  result.constant_value = std::abs(values.front());
  for (auto [begin, end] : eigenspace_ranges(levels)) {
    LevelStatistic s;
    s.eigenspace = levels[begin].eigenspace();
    s.lambda = levels[begin].lambda;
    double sq = 0.0;
    for (std::size_t j = begin; j < end; ++j) {
      sq += values[j] * values[j];
      s.basis_max = std::max(s.basis_max, std::abs(values[j]));
    }
    s.sup_value = std::sqrt(sq);
    result.levels.push_back(s);
  }

  std::vector<double> x, y;
  for (const auto& s : result.levels) {
    if (s.lambda >= lambda_max / 4.0 && s.lambda <= lambda_max && s.sup_value > kSweepFloor) {
      x.push_back(s.lambda);
      y.push_back(s.sup_value);
    }
  }
  if (x.size() >= 2) result.fit = fit_log_log(x, y);
  return result;
}

}  // namespace geoint
