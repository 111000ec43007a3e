#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "geoint/projector_kernels.hpp"

using namespace geoint;

namespace {

constexpr double kPi = std::numbers::pi;

const SchwartzWindow& window() {
  static const SchwartzWindow w = make_window();
  return w;
}

// J₀ power series; fine for y <= 20 in double precision.
double j0_series(double y) {
  double term = 1.0, sum = 1.0;
  const double q = -(y * y) / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

// Leading Hankel asymptotic terms; accurate to ~1e-10 for y >= 50.
double j0_asymptotic(double y) {
  const double chi = y - kPi / 4.0;
  const double p = 1.0 - 9.0 / (128.0 * y * y) + 3675.0 / (32768.0 * std::pow(y, 4));
  const double q = -1.0 / (8.0 * y) + 75.0 / (1024.0 * std::pow(y, 3));
  return std::sqrt(2.0 / (kPi * y)) * (p * std::cos(chi) - q * std::sin(chi));
}

double zonal_oracle(double lambda, double cos_d) {
  double sum = 0.0, p0 = 1.0, p1 = cos_d;
  for (int l = 0; l < 800; ++l) {
    double p = l == 0 ? 1.0 : (l == 1 ? cos_d : ((2.0 * l - 1.0) * cos_d * p1 - (l - 1.0) * p0) / l);
    if (l >= 2) {
      p0 = p1;
      p1 = p;
    }
    sum += window().chi(lambda - std::sqrt(l * (l + 1.0))) * (2 * l + 1) / (4 * kPi) * p;
  }
  return sum;
}

}  // namespace

TEST_CASE("amplitude model continuity") {
  for (double lambda : {10.0, 40.0, 160.0}) {
    KernelAmplitudeModel m{lambda, 1.0};
    const double r = 1.0 / lambda;
    const double below = m.bound(r * (1 - 1e-12)), above = m.bound(r);
    CHECK(std::max(below, above) / std::min(below, above) <= 2.0);
  }
}

TEST_CASE("sphere kernel against the zonal oracle") {
  const auto& w = window();
  const auto k = projector_kernel(sphere(), w, 20.0, {0, 0, 1}, {0, 0, 1});
  CHECK(std::abs(k.value - zonal_oracle(20.0, 1.0)) <= k.truncation_bound + 1e-12 * std::abs(k.value));
  CHECK(k.truncation_bound < 1e-7);
  const Vec3 a = {0.6, 0.0, 0.8}, b = {0.0, 0.28, 0.96};
  const double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  CHECK(projector_kernel(sphere(), w, 30.0, a, b).value == doctest::Approx(zonal_oracle(30.0, c)).epsilon(1e-9).scale(1.0));
  CHECK(zonal_kernel(w, 30.0, std::acos(c)) == doctest::Approx(zonal_oracle(30.0, c)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("kernel symmetry") {
  const auto& w = window();
  const Vec3 a = {0.6, 0.0, 0.8}, b = {0.0, 0.28, 0.96};
  CHECK(std::abs(projector_kernel(sphere(), w, 25.0, a, b).value -
                 projector_kernel(sphere(), w, 25.0, b, a).value) < 1e-12);
  const Vec3 p = {0.3, 1.7, 0}, q = {4.0, 2.2, 0};
  CHECK(std::abs(projector_kernel(flat_torus(), w, 25.0, p, q).value -
                 projector_kernel(flat_torus(), w, 25.0, q, p).value) < 1e-12);
}

TEST_CASE("torus kernel at zero frequency") {
  // Lattice oracle: every k with its χ weight; the constant mode enters with χ(0) = 1.
  const auto& w = window();
  double oracle = 0.0;
  for (int a = -250; a <= 250; ++a)
    for (int b = -250; b <= 250; ++b) oracle += w.chi(-std::hypot(a, b)) / (4 * kPi * kPi);
  const auto k = projector_kernel(flat_torus(), w, 0.0, {1, 1, 0}, {1, 1, 0});
  CHECK(std::abs(k.value - oracle) <= k.truncation_bound + 1e-12 * oracle);
  CHECK(k.truncation_bound < 1e-7);
  CHECK(w.chi(0.0) / (4 * kPi * kPi) < k.value);
}

TEST_CASE("circle transform") {
  CHECK(circle_ft(0.0).value == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(std::abs(circle_ft(10.0).value - 2 * kPi * j0_series(10.0)) < 1e-10);
  CHECK(std::abs(circle_ft(17.3).value - 2 * kPi * j0_series(17.3)) < 1e-9);
  CHECK(std::abs(circle_ft(50.0).value - 2 * kPi * j0_asymptotic(50.0)) < 1e-8);
  CHECK(std::abs(circle_ft(120.5).value - 2 * kPi * j0_asymptotic(120.5)) < 1e-8);
  for (double y : {1.0, 3.7, 25.0, 100.0}) {
    const auto c = circle_ft(y);
    REQUIRE(c.has_amplitudes);
    CHECK(std::abs(c.reconstruct() - std::complex<double>(c.value, 0.0)) < 1e-8);
  }
  CHECK_FALSE(circle_ft(0.5).has_amplitudes);
  const double a50 = std::abs(circle_ft(50.0).a_plus), a100 = std::abs(circle_ft(100.0).a_plus);
  CHECK(std::abs(a100 / a50 - 1.0) < 0.2);
  CHECK(a100 == doctest::Approx(std::sqrt(2 * kPi)).epsilon(0.01));
  CHECK_THROWS_AS(circle_ft(-1.0), std::invalid_argument);
}

TEST_CASE("sphere kernel scaling") {
  const double lambdas[] = {40.0, 80.0};
  const double radii[] = {0.3, 0.6};
  const auto r = kernel_scaling_check(sphere(), window(), lambdas, radii);
  CHECK(r.rows.size() == 4);
  CHECK(r.spread <= 1.2);
  CHECK(r.diagonal_spread <= 2.0);
  for (const auto& row : r.rows) CHECK(std::isfinite(row.ratio));
}

TEST_CASE("torus kernel against sphere") {
  const double lambdas[] = {40.0};
  const double r03[] = {0.3};
  const double r05[] = {0.5};
  const auto s = kernel_scaling_check(sphere(), window(), lambdas, r03);
  const auto t = kernel_scaling_check(flat_torus(), window(), lambdas, r03);
  const double ratio = t.constant_by_lambda[0] / s.constant_by_lambda[0];
  CHECK(ratio <= 3.0);
  CHECK(ratio >= 1.0 / 3.0);
  const auto t5 = kernel_scaling_check(flat_torus(), window(), lambdas, r05);
  CHECK(std::isfinite(t5.rows[0].ratio));
  CHECK(t5.rows[0].ratio <= 3.0 * s.constant_by_lambda[0]);
}

TEST_CASE("bilinear form equals the weighted pairing sum") {
  const auto& w = window();
  const auto b = TestWindowB::bump(0.0, 0.5);
  const auto eq = great_circle({0, 0, 1});
  CHECK(bilinear_geodesic_form(sphere(), w, 20.0, eq, TestWindowB::zero()) == 0.0);
  std::vector<double> values;
  for (double lambda : {20.0, 40.0}) {
    const double f = bilinear_geodesic_form(sphere(), w, lambda, eq, b);
    const double p = weighted_pairing_sum(sphere(), w, lambda, eq, b);
    CHECK(std::abs(f - p) <= 1e-8 * std::abs(p));
    values.push_back(f);
  }
  values.push_back(bilinear_geodesic_form(sphere(), w, 80.0, eq, b));
  for (double v : values) {
    CHECK(v > 0.0);
    CHECK(v < 2.0 * values.front());
  }
  const auto line = torus_line({0.4, 1.0, 0}, 1.0, (1.0 + std::sqrt(5.0)) / 2.0);
  const double f = bilinear_geodesic_form(flat_torus(), w, 20.0, line, b);
  const double p = weighted_pairing_sum(flat_torus(), w, 20.0, line, b);
  CHECK(std::abs(f - p) <= 1e-8 * std::abs(p));
}

TEST_CASE("windowed bilinear form decreases in T") {
  const auto& w = window();
  const auto b = TestWindowB::bump(0.0, 0.5);
  const auto line = torus_line({0, 0, 0}, 1.0, (1.0 + std::sqrt(5.0)) / 2.0);
  const double v2 = bilinear_geodesic_form(flat_torus(), w, 40.0, line, b, 2.0);
  const double v4 = bilinear_geodesic_form(flat_torus(), w, 40.0, line, b, 4.0);
  const double v8 = bilinear_geodesic_form(flat_torus(), w, 40.0, line, b, 8.0);
  CHECK(v2 > v4);
  CHECK(v4 > v8);
}

TEST_CASE("oscillatory amplitude pairing stays bounded") {
  const auto b = TestWindowB::bump(0.0, 0.5);
  std::vector<double> v;
  for (double lambda : {20.0, 40.0, 80.0, 160.0}) v.push_back(amplitude_pairing({lambda, 1.0}, b));
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  CHECK(*mx / *mn < 2.0);
}

TEST_CASE("comparison kernels") {
  const auto& w = window();
  const auto beta = make_beta();
  double c0 = 0.0;
  std::vector<ComparisonKernels> all;
  for (double T : {2.0, 8.0})
    for (double lambda : {40.0, 80.0}) {
      // Kernel scale: the diagonal value.
      const double diagonal = free_plane_kernel(w, T, lambda, 0.0);
      CHECK(diagonal > lambda);
      for (double r : {2.0, 5.0, 10.0}) {
        const auto k = comparison_kernels(w, beta, T, lambda, r);
        all.push_back(k);
        c0 = std::max(c0, k.envelope);
        CHECK(std::abs(k.k0_minus) <= 1e-8 * diagonal);
        CHECK(std::abs(k.k0 - k.k1 - k.k_phi) < 1e-8);
        if (r > T / 2) CHECK(std::abs(k.k0) < 1e-9);
      }
    }
  CHECK(c0 > 0.0);
  CHECK(c0 < 10.0);
  for (const auto& k : all) CHECK(std::abs(k.k0) * std::sqrt(k.rho) / std::sqrt(40.0) <= c0 * 1.0001);
}

TEST_CASE("flat torus unfolding") {
  const auto& w = window();
  const auto a = torus_unfolding_check(w, 5.0, 40.0, {0, 0, 0}, {0, 0, 0});
  CHECK(a.relative_error < 1e-6);
  const auto b = torus_unfolding_check(w, 5.0, 40.0, {1.0, 0, 0}, {0, 0, 0});
  CHECK(b.relative_error < 1e-6);
  const Vec3 x = {kPi, 0, 0}, o = {0, 0, 0};
  const auto full = torus_unfolding_check(w, 8.0, 40.0, x, o);
  const auto zero = torus_unfolding_check(w, 8.0, 40.0, x, o, true);
  CHECK(full.relative_error < 1e-6);
  CHECK(zero.relative_error >= 10.0 * full.relative_error);
}
