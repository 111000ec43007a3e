#pragma once

#include <span>
#include <utility>
#include <vector>

#include "geoint/quadrature.hpp"

namespace geoint {

/// Frequency half-widths of the window transforms. The window ρ has
/// ρ̂(t) = 0 for |t| >= 1/4, hence χ = ρ² has χ̂(τ) = 0 for |τ| >= 1/2.
inline constexpr double kRhoHatSupport = 0.25;
inline constexpr double kChiHatSupport = 0.5;

namespace window_tolerance {
inline constexpr double kEvenness = 1e-12;
inline constexpr double kNormalization = 1e-10;
inline constexpr double kLeakage = 1e-8;
inline constexpr double kPartition = 1e-8;
}  // namespace window_tolerance

/// exp(1 - 1/(1 - (x/radius)²)) inside (-radius, radius), zero outside.
/// Peak value 1 at the origin.
double unit_bump(double x, double radius = 1.0);

/// C∞ step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

/// Even band-limited window. The transform convention throughout is
///   f̂(t) = ∫ f(τ) e^{-itτ} dτ,   f(τ) = (2π)^{-1} ∫ f̂(t) e^{itτ} dt.
///
/// ρ̂ = c·(η∗η) with η the exponential-of-reciprocal bump on [-1/8, 1/8],
/// so ρ(τ) = (E(τ)/E(0))² with E(τ) = ∫ η(t) cos(tτ) dt. This makes ρ even,
/// nonnegative and exactly band-limited, with ρ(0) = 1.
class SchwartzWindow {
 public:
  SchwartzWindow();

  double rho(double tau) const;
  double chi(double tau) const;

  /// ρ̂ from the tabulated samples (local interpolation); exactly zero for
  /// |t| >= 1/4.
  double rho_hat(double t) const;
  /// ρ̂ by direct quadrature of the bump convolution.
  double rho_hat_exact(double t) const;
  /// χ̂ = (2π)^{-1} ρ̂∗ρ̂; exactly zero for |ω| >= 1/2.
  double chi_hat(double omega) const;

  /// Uniform sample grid of ρ̂ on [-1/4, 1/4].
  std::span<const double> rho_hat_samples() const { return rho_hat_samples_; }
  double rho_hat_grid_step() const { return grid_step_; }

  /// Scale factor c in ρ̂ = c·(η∗η).
  double normalization() const { return normalization_; }

  /// Smallest R (on a 1/4 grid up to 1000) with χ(τ) < threshold for all
  /// |τ| >= R.
  double chi_tail_radius(double threshold) const;

 private:
  double envelope_integral(double tau) const;
  double bump_convolution(double t) const;

  std::vector<double> half_nodes_;
  std::vector<double> half_weighted_bump_;
  double e0_ = 1.0;
  double normalization_ = 1.0;
  double grid_step_ = 0.0;
  std::vector<double> rho_hat_samples_;
  std::vector<double> tail_envelope_;  // max of χ over [k/4, 1000]
};

SchwartzWindow make_window();
double eval_chi(const SchwartzWindow& w, double tau);

/// Plateau cutoff: 1 on |τ| <= 3, 0 on |τ| >= 4.
class CutoffBeta {
 public:
  static constexpr double kPlateau = 3.0;
  static constexpr double kSupport = 4.0;
  double operator()(double tau) const;
  double eval(double tau) const { return (*this)(tau); }
};

CutoffBeta make_beta();

/// T-scaled windows built from the cutoff split of χ̂(·/T):
///   Ψ_T = inverse FT of β(τ)χ̂(τ/T),   Φ_T = inverse FT of (1-β(τ))χ̂(τ/T).
/// Their sum is the inverse FT of χ̂(·/T), which equals T·χ(Tσ).
class DerivedWindows {
 public:
  /// `max_frequency` bounds the |σ| for which the τ-quadrature keeps at
  /// least ten nodes per period.
  DerivedWindows(const SchwartzWindow& w, const CutoffBeta& beta, double T,
                 double max_frequency = 400.0);

  double T() const { return T_; }
  double psi(double sigma) const;
  double phi(double sigma) const;
  /// (Ψ_T(σ), Φ_T(σ)) sharing one pass over the nodes.
  std::pair<double, double> psi_phi(double sigma) const;
  /// Inverse FT of χ̂(·/T) by the same quadrature.
  double scaled_chi(double sigma) const;
  double max_frequency() const { return max_frequency_; }

 private:
  double T_;
  double max_frequency_;
  QuadratureRule rule_;            // on [0, T/2]
  std::vector<double> psi_weight_;  // w_k β(τ_k) χ̂(τ_k/T) / π
  std::vector<double> phi_weight_;  // w_k (1-β(τ_k)) χ̂(τ_k/T) / π
};

DerivedWindows derive_windows(const SchwartzWindow& w, const CutoffBeta& beta, double T);

}  // namespace geoint
