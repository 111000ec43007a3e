#pragma once

#include <complex>
#include <span>
#include <vector>

#include "geoint/period_integrals.hpp"
#include "geoint/surfaces.hpp"
#include "geoint/windows.hpp"

namespace geoint {

/// Eigen-sums keep every level with χ(T(λ-λ_j)) >= this weight.
inline constexpr double kKernelTruncation = 1e-10;

/// Bounds on the kernel amplitude: C₀ r^{-1/2} for r >= 1/λ and λ^{1/2}
/// below. The two agree at r = 1/λ when C₀ = 1.
struct KernelAmplitudeModel {
  double lambda = 1.0;
  double c0 = 1.0;

  double bound(double r) const;
  /// Smooth amplitude used in model oscillatory integrals: r^{-1/2} for
  /// r >= 1/λ, capped at λ^{1/2} below.
  double profile(double r) const { return bound(r); }
};

struct KernelEvaluation {
  double value = 0.0;
  double truncation_bound = 0.0;  // estimate of the dropped χ-weighted tail
  std::size_t terms = 0;
};

/// Σ_j χ(T(λ-λ_j)) e_j(x) e_j(y) through the eigenbasis.
KernelEvaluation projector_kernel(const SurfaceModel& surface, const SchwartzWindow& w,
                                  double lambda, const Vec3& x, const Vec3& y, double T = 1.0);

/// Sphere kernel as a function of distance, via Σ_l χ(...)(2l+1)/(4π) P_l(cos d).
double zonal_kernel(const SchwartzWindow& w, double lambda, double distance, double T = 1.0);

/// Envelope |b₊| + |b₋| of K r^{1/2} λ^{-1/2} = b₊e^{iλr} + b₋e^{-iλr}, read
/// off from kernel samples at λ and λ + π/(2r). `kernel(λ, r)` must be real.
template <class Kernel>
double amplitude_envelope(Kernel&& kernel, double lambda, double r) {
  const double shift = 3.14159265358979323846 / (2.0 * r);
  const double k0 = kernel(lambda, r) * std::sqrt(r / lambda);
  const double k1 = kernel(lambda + shift, r) * std::sqrt(r / (lambda + shift));
  return std::hypot(k0, k1);
}

struct KernelScalingRow {
  double lambda = 0.0;
  double r = 0.0;
  double kernel = 0.0;
  double ratio = 0.0;     // |kernel| r^{1/2} / λ^{1/2}
  double envelope = 0.0;  // amplitude envelope at (λ, r)
};

struct KernelScalingResult {
  std::vector<KernelScalingRow> rows;
  std::vector<double> constant_by_lambda;  // max envelope over r, per λ
  std::vector<double> diagonal_by_lambda;  // kernel(x, x) / λ
  double spread = 0.0;                     // max/min of constant_by_lambda
  double diagonal_spread = 0.0;
};

/// Kernel between a base point and a point at distance r along a geodesic
/// (meridian on the sphere, x-axis on the torus).
double kernel_at_distance(const SurfaceModel& surface, const SchwartzWindow& w, double lambda,
                          double r, double T = 1.0);

KernelScalingResult kernel_scaling_check(const SurfaceModel& surface, const SchwartzWindow& w,
                                         std::span<const double> lambdas,
                                         std::span<const double> radii);

/// ∬ b(t)b(s) K(γ(t), γ(s)) dt ds for a geodesic γ, with K the
/// χ(T(λ-·))-weighted kernel. Reduced to ∫ A(u) K(γ(u), γ(0)) du with A the
/// autocorrelation of b.
double bilinear_geodesic_form(const SurfaceModel& surface, const SchwartzWindow& w,
                              double lambda, const SurfaceCurve& geodesic,
                              const TestWindowB& b, double T = 1.0);

/// Σ_j χ(T(λ-λ_j)) |∫ b(t) e_j(γ(t)) dt|² over the same truncated spectrum.
double weighted_pairing_sum(const SurfaceModel& surface, const SchwartzWindow& w, double lambda,
                            const SurfaceCurve& curve, const TestWindowB& b, double T = 1.0);

/// A(u) = ∫ b(t) b(t-u) dt.
double autocorrelation(const TestWindowB& b, double u);

/// λ^{1/2} |∬ b(t)b(s) e^{iλ|t-s|} a(|t-s|) dt ds| for the model amplitude.
double amplitude_pairing(const KernelAmplitudeModel& model, const TestWindowB& b);

struct CircleFT {
  double y = 0.0;
  double value = 0.0;  // ∫_{S¹} e^{i y·ω} dω, real by symmetry
  bool has_amplitudes = false;
  std::complex<double> a_plus;
  std::complex<double> a_minus;

  /// y^{-1/2}(a₊e^{iy} + a₋e^{-iy}); valid when has_amplitudes.
  std::complex<double> reconstruct() const;
};

/// Circle transform by the trapezoid rule; for y >= 1 also the amplitude
/// pair from the Hankel split, with |a_±| → sqrt(2π).
CircleFT circle_ft(double y);

/// Radial kernels of the flat comparison operators on ℝ²:
///   K₀ from Tχ(T(λ∓r)), K₁ from Ψ_T(λ∓r), K_Φ from Φ_T(λ∓r),
/// each (2π)^{-1} ∫ f(r) J₀(rρ) r dr. K₀ = K₁ + K_Φ up to quadrature error.
struct ComparisonKernels {
  double rho = 0.0;
  double k0 = 0.0;
  double k0_plus = 0.0;   // positive-frequency part Tχ(T(λ-r))
  double k0_minus = 0.0;  // negative-frequency part Tχ(T(λ+r))
  double k1 = 0.0;
  double k_phi = 0.0;
  double envelope = 0.0;  // amplitude envelope of K₀ at (λ, ρ)
};

ComparisonKernels comparison_kernels(const SchwartzWindow& w, const CutoffBeta& beta, double T,
                                     double lambda, double rho);

/// Positive-frequency free-plane kernel (2π)^{-1}∫ Tχ(T(λ-r)) J₀(rρ) r dr.
double free_plane_kernel(const SchwartzWindow& w, double T, double lambda, double rho);

struct UnfoldingCheck {
  double eigen_side = 0.0;
  double image_side = 0.0;
  double relative_error = 0.0;
  std::size_t images = 0;
};

/// Lattice eigen-sum against the sum of free-plane kernels over the images
/// x - y + 2πm. `zero_image_only` keeps m = 0 alone.
UnfoldingCheck torus_unfolding_check(const SchwartzWindow& w, double T, double lambda,
                                     const Vec3& x, const Vec3& y, bool zero_image_only = false);

}  // namespace geoint
