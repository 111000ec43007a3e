#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "geoint/oscillatory.hpp"
#include "geoint/windows.hpp"

using namespace geoint;

namespace {

// Trapezoid rule for ∫ f(x) e^{iλx} dx over [-r, r]; spectrally accurate
// because the bump vanishes to all orders at the ends.
std::complex<double> trapezoid_1d(double radius, double lambda, int n = 20000) {
  const double h = 2.0 * radius / n;
  std::complex<double> sum = 0.0;
  for (int k = 1; k < n; ++k) {
    const double x = -radius + k * h;
    sum += unit_bump(x, radius) * std::polar(1.0, lambda * x);
  }
  return sum * h;
}

HGeodesic x1_axis() { return {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}; }

}  // namespace

TEST_CASE("brute force: trivial and factorized oracles") {
  OscillatoryProblem zero = canonical_no_critical(0.5);
  zero.amplitude = Amplitude::product([](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK(std::abs(brute_force_integral(zero, 50.0)) == 0.0);

  OscillatoryProblem flat = canonical_full_hessian(1.0);
  flat.phase = [](double, double) { return Jet2{}; };
  flat.phase_value = nullptr;
  const double mass = std::real(trapezoid_1d(1.0, 0.0));
  const auto v = brute_force_integral(flat, 30.0);
  CHECK(std::abs(v.real() - mass * mass) < 1e-12);
  CHECK(std::abs(v.imag()) < 1e-15);

  const auto p = canonical_no_critical(0.5);
  const auto one = trapezoid_1d(0.5, 50.0);
  CHECK(std::abs(brute_force_integral(p, 50.0) - one * one) < 1e-10);

  CHECK_THROWS_AS(brute_force_integral(p, 2500.0), std::length_error);
  CHECK_THROWS_AS(brute_force_integral(p, 0.5), std::invalid_argument);
}

TEST_CASE("brute force: self-convergence and conjugation symmetry") {
  for (const auto& p : {canonical_no_critical(), canonical_full_hessian(), canonical_mixed_only()}) {
    p.validate();
    CHECK(self_convergence(p, 60.0) < 1e-9);
    OscillatoryProblem neg = p;
    neg.phase = [f = p.phase](double t, double s) {
      Jet2 j = f(t, s);
      j.value = -j.value, j.dt = -j.dt, j.ds = -j.ds, j.dtt = -j.dtt, j.dts = -j.dts, j.dss = -j.dss;
      return j;
    };
    neg.phase_value = [f = p.phase_value](double t, double s) { return -f(t, s); };
    CHECK(std::abs(brute_force_integral(p, 40.0) - std::conj(brute_force_integral(neg, 40.0))) < 1e-12);
  }
}

TEST_CASE("problem validation") {
  OscillatoryProblem p = canonical_full_hessian(1.0);
  p.amplitude = Amplitude::product([](double) { return 1.0; }, [](double t) { return unit_bump(t, 1.0); });
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  canonical_full_hessian(1.0).validate();
}

TEST_CASE("classify_phase") {
  CHECK(classify_phase(canonical_no_critical()).kind == PhaseClass::NoCritical);
  const auto full = classify_phase(canonical_full_hessian());
  CHECK(full.kind == PhaseClass::FullHessianNondegenerate);
  CHECK(full.jet.hessian_det() == doctest::Approx(-4.0));
  const auto mixed = classify_phase(canonical_mixed_only());
  CHECK(mixed.kind == PhaseClass::MixedOnly);
  CHECK(std::abs(mixed.t0) < 1e-6);
  CHECK(std::abs(mixed.s0) < 1e-6);
  CHECK(mixed.jet.dts == doctest::Approx(2.0));
  CHECK(std::abs(mixed.jet.hessian_det()) < kDegenerateHessian);

  OscillatoryProblem two = canonical_full_hessian();
  two.phase = [](double t, double s) {
    const double q = t * t - 0.25;
    return Jet2{q * q + s * s, 4 * t * q, 2 * s, 12 * t * t - 1.0, 0.0, 2.0};
  };
  CHECK_THROWS_AS(classify_phase(two), std::domain_error);

  OscillatoryProblem flat = canonical_full_hessian();
  flat.phase = [](double t, double s) {
    return Jet2{t * t * t * t + s * s * s * s, 4 * t * t * t, 4 * s * s * s, 12 * t * t, 0.0, 12 * s * s};
  };
  CHECK_THROWS_AS(classify_phase(flat), std::domain_error);
}

TEST_CASE("decay fits on the canonical phases") {
  const std::vector<double> fast{20, 30, 45, 70, 100, 160};
  const DecayFit none = decay_fit(canonical_no_critical(), fast);
  CHECK(none.valid);
  CHECK(none.p >= 1.8);

  const std::vector<double> mid{50, 100, 200, 400, 800};
  const DecayFit full = decay_fit(canonical_full_hessian(), mid);
  CHECK(full.valid);
  CHECK(std::abs(full.p - 1.0) <= 0.1);
  // Two-dimensional stationary phase: 2π |det|^{-1/2} a(0,0) / λ = π / λ.
  CHECK(std::abs(full.C - std::numbers::pi) <= 0.15 * std::numbers::pi);
  CHECK(full.magnitudes.back() * 800.0 == doctest::Approx(std::numbers::pi).epsilon(1e-4));

  const std::vector<double> low{25, 50, 100, 200, 400};
  const DecayFit mixed = decay_fit(canonical_mixed_only(), low);
  CHECK(mixed.valid);
  CHECK(mixed.p >= 0.5);
  double first = std::sqrt(low[0]) * mixed.magnitudes[0], top = 0.0;
  for (std::size_t k = 0; k < low.size(); ++k) top = std::max(top, std::sqrt(low[k]) * mixed.magnitudes[k]);
  CHECK(top <= 2.0 * first);
  CHECK(none.p >= mixed.p - 0.1);

  const std::vector<double> short_grid{20, 40, 80, 160};
  CHECK_THROWS_AS(decay_fit(canonical_no_critical(), short_grid), std::invalid_argument);
  const std::vector<double> outside{10, 20, 40, 80, 160};
  CHECK_THROWS_AS(decay_fit(canonical_no_critical(), outside), std::invalid_argument);

  const std::vector<double> lam{20, 40, 80, 160, 320}, mags{1.0, 0.5, 1e-20, 0.125, 0.0625};
  const DecayFit dropped = fit_decay(lam, mags);
  CHECK(dropped.used == 4);
  CHECK_FALSE(dropped.valid);
  CHECK(dropped.p == doctest::Approx(1.0));
}

TEST_CASE("epsilon split") {
  const auto p = canonical_mixed_only();
  const std::vector<double> grid{25, 40, 70, 120, 200};
  const std::vector<double> eps{0.4, 0.2, 0.1};
  const auto table = epsilon_split_check(p, eps, grid);
  REQUIRE(table.rows.size() == 15);
  CHECK(table.outer_decay_ok);
  for (const auto& row : table.rows) CHECK(row.full > 0.0);

  // The cutoff swallows the whole support: I₁ vanishes identically.
  const std::vector<double> wide{1.0};
  const auto swallowed = epsilon_split_check(p, wide, grid);
  for (const auto& row : swallowed.rows) {
    CHECK(row.outer == 0.0);
    CHECK(row.inner == doctest::Approx(row.full).epsilon(1e-12));
  }

  const std::vector<double> tiny{0.005};
  CHECK_THROWS_AS(epsilon_split_check(p, tiny, grid), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_split_check(canonical_full_hessian(), eps, grid), std::invalid_argument);
}

TEST_CASE("amplitude profile derivative bounds") {
  const KernelAmplitudeModel model{100.0, 1.0};
  const double h = 1e-6;
  for (double r = 0.02; r < 6.0; r *= 1.3) {
    CHECK(model.profile(r) <= std::pow(r, -0.5) + 1e-12);
    const double d = (model.profile(r + h) - model.profile(r - h)) / (2 * h);
    CHECK(std::abs(d) * std::pow(r, 1.5) <= 0.5 + 1e-4);
  }
}

TEST_CASE("negative-curvature model integrals") {
  const FuchsianGroup g = bolza_group();
  const HGeodesic axis = x1_axis();
  const auto b = TestWindowB::bump(0.0, 0.5);
  const KernelAmplitudeModel model{100.0, 1.0};
  const std::vector<double> grid{20, 30, 45, 70, 100, 160};

  // Stabilizer: φ = s + ℓ − t is linear.
  const auto stab = negative_curvature_problem(axis, g.generators[0], b, b, model);
  CHECK(classify_phase(stab).kind == PhaseClass::NoCritical);
  const DecayFit fs = decay_fit(stab, grid);
  CHECK(fs.valid);
  CHECK(fs.p >= 0.9);

  for (std::size_t k : {1u, 2u, 5u}) {
    const DecayFit f = decay_fit(negative_curvature_problem(axis, g.generators[k], b, b, model), grid);
    CHECK(f.valid);
    CHECK(f.p >= 0.45);
  }

  // Orthogonal to the axis of b at its own foot: one nondegenerate critical point.
  const DeckTransform alpha = g.generators[1];
  const HGeodesic ax = *translation_axis(alpha);
  const HGeodesic gam{ax(0.1).x, ax.plane_normal()};
  const auto cross = negative_curvature_integral(gam, alpha, b, b, model, 50.0);
  CHECK(cross.phase.kind == PhaseClass::FullHessianNondegenerate);
  double first = 0.0, top = 0.0;
  for (double lambda : {50.0, 100.0, 200.0, 400.0, 800.0}) {
    const double v = std::sqrt(lambda) * std::abs(negative_curvature_integral(gam, alpha, b, b, model, lambda).value);
    if (first == 0.0) first = v;
    top = std::max(top, v);
  }
  CHECK(top <= 1.0 * first);

  CHECK_THROWS_AS(negative_curvature_integral(axis, DeckTransform{}, b, b, model, 50.0), std::invalid_argument);
  const auto minus = negative_curvature_integral(gam, alpha, b, b, model, 60.0, -1).value;
  const auto plus = negative_curvature_integral(gam, alpha, b, b, model, 60.0, 1).value;
  CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
}
