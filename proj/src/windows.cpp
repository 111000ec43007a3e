#include "geoint/windows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geoint {

namespace {

constexpr double kBumpRadius = kRhoHatSupport / 2.0;  // η lives on [-1/8, 1/8]
constexpr std::size_t kEnvelopeOrder = 256;
constexpr std::size_t kConvolutionOrder = 128;
constexpr std::size_t kGridIntervals = 8192;
constexpr int kInterpolationPoints = 10;
constexpr double kTailStep = 0.25;
constexpr double kTailCap = 1000.0;

double eta(double t) { return unit_bump(t, kBumpRadius); }

}  // namespace

double unit_bump(double x, double radius) {
  const double y = x / radius;
  if (std::abs(y) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double f0 = std::exp(-1.0 / x);
  const double f1 = std::exp(-1.0 / (1.0 - x));
  return f0 / (f0 + f1);
}

SchwartzWindow::SchwartzWindow() {
  const QuadratureRule& gl = gauss_legendre(kEnvelopeOrder);
  for (std::size_t i = 0; i < gl.size(); ++i) {
    if (gl.nodes[i] <= 0.0) continue;
    const double t = kBumpRadius * gl.nodes[i];
    half_nodes_.push_back(t);
    half_weighted_bump_.push_back(2.0 * kBumpRadius * gl.weights[i] * eta(t));
  }
  e0_ = envelope_integral(0.0);
  normalization_ = 2.0 * std::numbers::pi / (e0_ * e0_);

  grid_step_ = 2.0 * kRhoHatSupport / static_cast<double>(kGridIntervals);
  rho_hat_samples_.resize(kGridIntervals + 1);
  for (std::size_t i = 0; i <= kGridIntervals; ++i) {
    const double t = -kRhoHatSupport + grid_step_ * static_cast<double>(i);
    rho_hat_samples_[i] = rho_hat_exact(t);
  }

  const auto count = static_cast<std::size_t>(kTailCap / kTailStep) + 1;
  tail_envelope_.resize(count);
  double running = 0.0;
  for (std::size_t k = count; k-- > 0;) {
    running = std::max(running, chi(kTailStep * static_cast<double>(k)));
    tail_envelope_[k] = running;
  }
}

double SchwartzWindow::envelope_integral(double tau) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < half_nodes_.size(); ++i)
    sum += half_weighted_bump_[i] * std::cos(half_nodes_[i] * tau);
  return sum;
}

double SchwartzWindow::rho(double tau) const {
  const double e = envelope_integral(tau) / e0_;
  return e * e;
}

double SchwartzWindow::chi(double tau) const {
  const double r = rho(tau);
  return r * r;
}

double SchwartzWindow::bump_convolution(double t) const {
  const double lo = std::max(-kBumpRadius, t - kBumpRadius);
  const double hi = std::min(kBumpRadius, t + kBumpRadius);
  if (!(hi > lo)) return 0.0;
  const QuadratureRule& gl = gauss_legendre(kConvolutionOrder);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double u = mid + half * gl.nodes[i];
    sum += gl.weights[i] * eta(u) * eta(t - u);
  }
  return half * sum;
}

double SchwartzWindow::rho_hat_exact(double t) const {
  if (std::abs(t) >= kRhoHatSupport) return 0.0;
  return normalization_ * bump_convolution(t);
}

double SchwartzWindow::rho_hat(double t) const {
  if (std::abs(t) >= kRhoHatSupport) return 0.0;
  const double pos = (t + kRhoHatSupport) / grid_step_;
  const auto last_start = static_cast<long>(kGridIntervals) - (kInterpolationPoints - 1);
  long start = static_cast<long>(std::floor(pos)) - (kInterpolationPoints / 2 - 1);
  start = std::clamp(start, 0L, last_start);
  // Lagrange interpolation on equispaced nodes start, ..., start + n - 1.
  const double x = pos - static_cast<double>(start);
  double sum = 0.0;
  for (int j = 0; j < kInterpolationPoints; ++j) {
    double basis = 1.0;
    for (int k = 0; k < kInterpolationPoints; ++k) {
      if (k == j) continue;
      basis *= (x - k) / static_cast<double>(j - k);
    }
    sum += basis * rho_hat_samples_[static_cast<std::size_t>(start + j)];
  }
  return sum;
}

double SchwartzWindow::chi_hat(double omega) const {
  if (std::abs(omega) >= kChiHatSupport) return 0.0;
  const double lo = std::max(-kRhoHatSupport, omega - kRhoHatSupport);
  const double hi = std::min(kRhoHatSupport, omega + kRhoHatSupport);
  const QuadratureRule& gl = gauss_legendre(kConvolutionOrder);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double u = mid + half * gl.nodes[i];
    sum += gl.weights[i] * rho_hat(u) * rho_hat(omega - u);
  }
  return half * sum / (2.0 * std::numbers::pi);
}

double SchwartzWindow::chi_tail_radius(double threshold) const {
  for (std::size_t k = 0; k < tail_envelope_.size(); ++k) {
    if (tail_envelope_[k] < threshold) return kTailStep * static_cast<double>(k);
  }
  return kTailCap;
}

SchwartzWindow make_window() { return SchwartzWindow{}; }

double eval_chi(const SchwartzWindow& w, double tau) { return w.chi(tau); }

double CutoffBeta::operator()(double tau) const {
  return 1.0 - smooth_step(std::abs(tau) - kPlateau);
}

CutoffBeta make_beta() { return CutoffBeta{}; }

DerivedWindows::DerivedWindows(const SchwartzWindow& w, const CutoffBeta& beta, double T,
                               double max_frequency)
    : T_(T), max_frequency_(max_frequency) {
  if (!(T >= 1.0)) throw std::invalid_argument("derive_windows: T must be >= 1");
  if (!(max_frequency > 0.0))
    throw std::invalid_argument("derive_windows: max_frequency must be positive");
  const double top = kChiHatSupport * T;
  std::vector<double> breaks{0.0};
  for (double b : {CutoffBeta::kPlateau, CutoffBeta::kSupport})
    if (b < top) breaks.push_back(b);
  breaks.push_back(top);
  constexpr std::size_t order = 16;
  const double max_width =
      static_cast<double>(order) * 2.0 * std::numbers::pi / (10.0 * max_frequency);
  rule_ = composite_gauss_legendre(breaks, max_width, order);
  psi_weight_.resize(rule_.size());
  phi_weight_.resize(rule_.size());
  for (std::size_t k = 0; k < rule_.size(); ++k) {
    const double tau = rule_.nodes[k];
    const double base = rule_.weights[k] * w.chi_hat(tau / T) / std::numbers::pi;
    const double b = beta(tau);
    psi_weight_[k] = base * b;
    phi_weight_[k] = base * (1.0 - b);
  }
}

double DerivedWindows::psi(double sigma) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule_.size(); ++k)
    sum += psi_weight_[k] * std::cos(sigma * rule_.nodes[k]);
  return sum;
}

double DerivedWindows::phi(double sigma) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule_.size(); ++k)
    sum += phi_weight_[k] * std::cos(sigma * rule_.nodes[k]);
  return sum;
}

std::pair<double, double> DerivedWindows::psi_phi(double sigma) const {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < rule_.size(); ++k) {
    const double c = std::cos(sigma * rule_.nodes[k]);
    a += psi_weight_[k] * c;
    b += phi_weight_[k] * c;
  }
  return {a, b};
}

double DerivedWindows::scaled_chi(double sigma) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule_.size(); ++k)
    sum += (psi_weight_[k] + phi_weight_[k]) * std::cos(sigma * rule_.nodes[k]);
  return sum;
}

DerivedWindows derive_windows(const SchwartzWindow& w, const CutoffBeta& beta, double T) {
  return DerivedWindows(w, beta, T);
}

}  // namespace geoint
