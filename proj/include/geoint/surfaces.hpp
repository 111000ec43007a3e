#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace geoint {

using Vec3 = std::array<double, 3>;

enum class SurfaceKind { Sphere, FlatTorus };

/// Unit round sphere or the flat torus ℝ²/(2πℤ)².
/// Sphere points are unit 3-vectors; torus points use the first two
/// coordinates (third ignored).
struct SurfaceModel {
  SurfaceKind kind = SurfaceKind::Sphere;

  double volume() const;
  std::string name() const;
};

SurfaceModel sphere();
SurfaceModel flat_torus();

enum class TorusMode { Constant, Cosine, Sine };

struct SphereLabel {
  int degree = 0;
  int order = 0;  // negative orders carry the sin(|m|φ) factor
};

struct TorusLabel {
  int k1 = 0;
  int k2 = 0;
  TorusMode mode = TorusMode::Constant;
};

/// One member of the real orthonormal eigenbasis, −Δe = λ²e.
struct EigenLevel {
  SurfaceKind kind = SurfaceKind::Sphere;
  std::size_t index = 0;
  double lambda = 0.0;
  SphereLabel sphere;
  TorusLabel torus;

  /// Integer identifying the eigenspace: l on the sphere, |k|² on the torus.
  long eigenspace() const;
};

/// All basis functions with λ ≤ lambda_max, sorted by λ and then by labels.
std::vector<EigenLevel> enumerate_spectrum(const SurfaceModel& surface, double lambda_max);

/// Half-open [begin, end) index ranges of equal eigenvalue in a sorted list.
std::vector<std::pair<std::size_t, std::size_t>> eigenspace_ranges(
    std::span<const EigenLevel> levels);

double eval_eigenfunction(const EigenLevel& level, const Vec3& point);

/// Fully normalized associated Legendre values P̄_l^m(x) for l = m..lmax,
/// with ∫_{-1}^{1} P̄² dx = 1/(2π). Uses upward recurrence in l with a
/// running scale exponent so that large orders near the poles underflow
/// gracefully.
std::vector<double> normalized_legendre_column(int lmax, int m, double x);

/// Every real spherical harmonic of degree ≤ lmax at `point`, stored at
/// index l² + l + m.
void spherical_harmonics_all(int lmax, const Vec3& point, std::vector<double>& out);

/// Unit-speed curve on a model surface. Geodesics report `is_geodesic`;
/// periodic ones carry their minimal period in `length`.
struct SurfaceCurve {
  SurfaceKind kind = SurfaceKind::Sphere;
  std::function<Vec3(double)> eval;
  double length = std::numeric_limits<double>::infinity();
  bool periodic = false;
  bool is_geodesic = true;

  Vec3 operator()(double t) const { return eval(t); }
};

/// Great circle in the plane orthogonal to `axis`. The start point is the
/// normalized projection of e₁ (or e₂ when the axis is close to e₁).
SurfaceCurve great_circle(const Vec3& axis);

/// Straight line through `point` with unit `direction`. Directions with a
/// rational slope p/q (|p|, |q| ≤ 1000) give a closed geodesic of period
/// 2π·sqrt(p² + q²) for coprime (p, q); otherwise length is +infinity.
SurfaceCurve torus_line(const Vec3& point, double dx, double dy);

/// Equator displaced in latitude by amplitude·sin(2u) and reparameterized
/// by arc length. Periodic, not a geodesic.
SurfaceCurve perturbed_equator(double amplitude = 0.05);

double geodesic_distance(const SurfaceModel& surface, const Vec3& x, const Vec3& y);

}  // namespace geoint
