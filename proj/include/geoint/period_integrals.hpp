#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "geoint/fit.hpp"
#include "geoint/quadrature.hpp"
#include "geoint/surfaces.hpp"

namespace geoint {

/// Smooth weight b(t) with declared support [lo, hi] ⊆ [-1/2, 1/2].
/// Evaluation returns exactly zero outside the support.
class TestWindowB {
 public:
  TestWindowB(std::function<double(double)> f, double lo, double hi);

  double operator()(double t) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_zero() const { return zero_; }

  static TestWindowB zero();
  /// unit_bump centred at `center` with the given radius, times `height`.
  static TestWindowB bump(double center = 0.0, double radius = 0.5, double height = 1.0);

 private:
  std::function<double(double)> f_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  bool zero_ = false;
};

struct PeriodRecord {
  std::size_t level_index = 0;
  double lambda = 0.0;
  double value = 0.0;
};

/// Gauss-Legendre nodes on [t0, t1] dense enough for frequencies up to
/// `frequency` (at least 8 nodes per wavelength, at least `min_panels`
/// 16-point panels).
QuadratureRule oscillatory_rule(double t0, double t1, double frequency, std::size_t min_panels = 4);

/// ∫_{t0}^{t1} e(γ(t)) dt.
double period_integral(const EigenLevel& level, const SurfaceCurve& curve, double t0, double t1);

/// ∫ b(t) e(γ(t)) dt over the support of b.
double windowed_pairing(const EigenLevel& level, const SurfaceCurve& curve, const TestWindowB& b);

/// Weighted period integrals of every listed level in one pass over the
/// curve. With `b`, the integrand is b(t)e(γ(t)) restricted to
/// [t0, t1] ∩ supp b.
std::vector<double> period_integrals_all(std::span<const EigenLevel> levels,
                                         const SurfaceCurve& curve, double t0, double t1,
                                         const TestWindowB* b = nullptr);

/// Σ_{λ_j ≤ λ} |∫_γ e_j ds|² over one full period of γ.
double kuznecov_sum(const SurfaceModel& surface, const SurfaceCurve& curve, double lambda);

/// Partial sums at each λ in `lambdas`, sharing one spectrum pass.
std::vector<double> kuznecov_partial_sums(const SurfaceModel& surface, const SurfaceCurve& curve,
                                          std::span<const double> lambdas);

/// (∫_{t0}^{t0+1} |e(γ(t))|² dt)^{1/2}. Rejects ranges whose length is not 1.
double restriction_norm(const EigenLevel& level, const SurfaceCurve& curve, double t0, double t1);

/// Per-eigenspace summary. `sup_value` is sup |∫ f| over unit-norm f in the
/// eigenspace, i.e. the root sum of squares of the basis integrals.
struct LevelStatistic {
  long eigenspace = 0;
  double lambda = 0.0;
  double sup_value = 0.0;
  double basis_max = 0.0;
};

struct BoundSweepResult {
  std::vector<PeriodRecord> records;
  std::vector<LevelStatistic> levels;
  LineFit fit;             // log sup_value vs log λ over [λmax/4, λmax]
  double max_abs = 0.0;    // max |a_j| over all records
  double constant_value = 0.0;
};

inline constexpr double kSweepFloor = 1e-10;

/// Sweep over the spectrum up to lambda_max. Periodic curves integrate over
/// one period unless `range` is given; non-periodic curves need a range.
BoundSweepResult bound_sweep(const SurfaceModel& surface, const SurfaceCurve& curve,
                             double lambda_max, const TestWindowB* b = nullptr,
                             std::optional<std::pair<double, double>> range = std::nullopt);

}  // namespace geoint
