#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "geoint/windows.hpp"

using namespace geoint;

namespace {

const SchwartzWindow& window() {
  static const SchwartzWindow w = make_window();
  return w;
}

// Independent route to ρ: composite Simpson on the bump transform.
double simpson_envelope(double tau) {
  const double a = 0.125;
  const int n = 20000;
  const double h = 2.0 * a / n;
  auto f = [&](double t) {
    const double y = t / a;
    if (std::abs(y) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - y * y)) * std::cos(t * tau);
  };
  double s = f(-a) + f(a);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-a + i * h);
  return s * h / 3.0;
}

// Riemann-sum transform of χ on [-half, half]; χ is band-limited so a coarse
// step has no aliasing for |ω| < π/step - 1/2.
double dft_chi(double omega, double half, double step) {
  const auto n = static_cast<long>(half / step);
  double sum = 0.0;
  for (long k = -n; k <= n; ++k) {
    const double tau = step * static_cast<double>(k);
    sum += window().chi(tau) * std::cos(omega * tau);
  }
  return sum * step;
}

}  // namespace

TEST_CASE("rho normalization and evenness") {
  const auto& w = window();
  CHECK(std::abs(w.rho(0.0) - 1.0) < window_tolerance::kNormalization);
  for (double tau : {0.7, 3.1, 17.0, 55.5})
    CHECK(std::abs(w.rho(tau) - w.rho(-tau)) < window_tolerance::kEvenness);
  CHECK(eval_chi(w, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_chi(w, 2.3) == doctest::Approx(w.rho(2.3) * w.rho(2.3)));
}

TEST_CASE("rho agrees with an independent Simpson transform") {
  const auto& w = window();
  const double e0 = simpson_envelope(0.0);
  for (double tau : {0.0, 1.0, 8.0, 25.0, 60.0}) {
    const double r = simpson_envelope(tau) / e0;
    CHECK(std::abs(w.rho(tau) - r * r) < 1e-12);
  }
}

TEST_CASE("rho_hat integrates back to rho") {
  const auto& w = window();
  auto samples = w.rho_hat_samples();
  const double h = w.rho_hat_grid_step();
  for (double tau : {0.0, 2.0, 10.0}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double t = -0.25 + h * static_cast<double>(i);
      sum += samples[i] * std::cos(t * tau);
    }
    CHECK(std::abs(sum * h / (2.0 * std::numbers::pi) - w.rho(tau)) < 1e-10);
  }
  CHECK(w.rho_hat(0.25) == 0.0);
  CHECK(w.rho_hat(-0.3) == 0.0);
  CHECK(std::abs(w.rho_hat(0.1234) - w.rho_hat_exact(0.1234)) < 1e-10);
}

TEST_CASE("chi_hat support and consistency with a discrete transform") {
  const auto& w = window();
  CHECK(w.chi_hat(0.5) == 0.0);
  CHECK(w.chi_hat(0.7) == 0.0);
  for (double omega : {0.0, 0.2, 0.45})
    CHECK(std::abs(dft_chi(omega, 512.0, 1.0 / 16) - w.chi_hat(omega)) < 1e-9);
  for (double omega : {0.55, 0.6, 1.0, 3.0})
    CHECK(std::abs(dft_chi(omega, 512.0, 1.0 / 16)) < window_tolerance::kLeakage);
}

TEST_CASE("chi tail") {
  const auto& w = window();
  CHECK(eval_chi(w, 40.0) < 1e-6);
  const double r = w.chi_tail_radius(1e-6);
  CHECK(r > 0.0);
  CHECK(r < 200.0);
  CHECK(eval_chi(w, r + 0.1) < 1e-6);
}

TEST_CASE("beta cutoff") {
  const auto beta = make_beta();
  CHECK(beta(2.0) == 1.0);
  CHECK(beta(-3.0) == 1.0);
  CHECK(beta(5.0) == 0.0);
  CHECK(beta(4.0) == 0.0);
  CHECK(beta(3.5) > 0.0);
  CHECK(beta(3.5) < 1.0);
  double prev = 1.0;
  for (double t = 3.0; t <= 4.0; t += 0.01) {
    CHECK(beta(t) <= prev);
    prev = beta(t);
  }
}

TEST_CASE("derived windows partition and scaling") {
  const auto& w = window();
  const auto beta = make_beta();
  for (double T : {2.0, 10.0}) {
    const auto d = derive_windows(w, beta, T);
    for (double sigma : {0.0, 0.1, 1.0, 5.0}) {
      const double expect = T * w.chi(T * sigma);
      CHECK(std::abs(d.psi(sigma) + d.phi(sigma) - expect) < window_tolerance::kPartition);
      CHECK(std::abs(d.scaled_chi(sigma) - expect) < window_tolerance::kPartition);
    }
  }
}

TEST_CASE("phi tail decays faster than fourth power") {
  const auto d = derive_windows(window(), make_beta(), 10.0);
  double c_near = 0.0, c_far = 0.0;
  for (double sigma = 20.0; sigma <= 100.0; sigma += 0.5) {
    const double v = std::abs(d.phi(sigma)) * std::pow(1.0 + sigma, 4);
    (sigma < 60.0 ? c_near : c_far) = std::max(sigma < 60.0 ? c_near : c_far, v);
  }
  CHECK(c_near > 0.0);
  CHECK(c_far <= c_near);
  CHECK(std::abs(d.phi(50.0)) * std::pow(51.0, 4) <= c_near);
}

TEST_CASE("derived windows domain") {
  const auto& w = window();
  const auto beta = make_beta();
  CHECK_THROWS_AS(derive_windows(w, beta, 0.5), std::invalid_argument);
  const auto d = derive_windows(w, beta, 1.0);
  CHECK(std::isfinite(d.psi(0.3)));
  CHECK(d.phi(0.3) == 0.0);
  CHECK(std::abs(d.psi(0.3) - w.chi(0.3)) < 1e-8);
}
