#include "geoint/projector_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geoint/quadrature.hpp"

namespace geoint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;
// Radial integrals run until χ drops below this.
constexpr double kRadialTail = 1e-14;
constexpr double kDerivedTail = 200.0;

double sphere_lambda(int l) { return std::sqrt(static_cast<double>(l) * (l + 1)); }

// Spectral half-width: keep |λ - λ_j| <= band.
double band_width(const SchwartzWindow& w, double T, double threshold = kKernelTruncation) {
  if (!(T >= 1.0)) throw std::invalid_argument("kernel window scale T must be >= 1");
  return w.chi_tail_radius(threshold) / T;
}

int sphere_degree_above(double lambda) {
  if (lambda <= 0.0) return 0;
  int l = static_cast<int>(std::floor(lambda));
  while (l > 0 && sphere_lambda(l - 1) >= lambda) --l;
  while (sphere_lambda(l) < lambda) ++l;
  return l;
}

int sphere_degree_below(double lambda) {
  int l = static_cast<int>(std::floor(lambda)) + 1;
  while (l >= 0 && sphere_lambda(l) > lambda) --l;
  return l;
}

// J₀(y) through the trapezoid rule on the circle.
double circle_mean(double y) {
  const auto n = static_cast<std::size_t>(std::ceil(1.5 * std::abs(y))) + 64;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += std::cos(y * std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
  return sum / static_cast<double>(n);
}

struct LatticeTerm {
  double weight;
  int k1;
  int k2;
};

// χ(T(λ-|k|)) / (4π²) over the full lattice, truncated at the window band.
std::vector<LatticeTerm> lattice_terms(const SchwartzWindow& w, double lambda, double T,
                                       double threshold, double scale) {
  const double band = band_width(w, T, threshold);
  const double top = lambda + band;
  const double bottom = std::max(0.0, lambda - band);
  const int kmax = static_cast<int>(std::floor(top));
  std::vector<LatticeTerm> out;
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      const double n = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      if (n > top || n < bottom) continue;
      out.push_back({scale * w.chi(T * (lambda - n)) / kFourPiSq, k1, k2});
    }
  }
  return out;
}

double radial_integral(double lo, double hi, double frequency, double rho,
                       const std::function<double(double)>& profile) {
  if (!(hi > lo)) return 0.0;
  const std::size_t panels = panels_for_frequency(hi - lo, frequency, 8.0, 16, 8);
  const QuadratureRule rule = composite_gauss_legendre(lo, hi, panels, 16);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const double f = profile(r);
    if (f == 0.0) continue;
    sum += rule.weights[i] * f * circle_mean(r * rho) * r;
  }
  return sum / (2.0 * kPi);
}

}  // namespace

double KernelAmplitudeModel::bound(double r) const {
  if (r <= 0.0 || r < 1.0 / lambda) return std::sqrt(lambda);
  return c0 / std::sqrt(r);
}

KernelEvaluation projector_kernel(const SurfaceModel& surface, const SchwartzWindow& w,
                                  double lambda, const Vec3& x, const Vec3& y, double T) {
  const double band = band_width(w, T);
  KernelEvaluation out;
  if (surface.kind == SurfaceKind::Sphere) {
    const int lo = sphere_degree_above(lambda - band);
    const int hi = sphere_degree_below(lambda + band);
    std::vector<double> yx, yy;
    spherical_harmonics_all(hi, x, yx);
    spherical_harmonics_all(hi, y, yy);
    for (int l = lo; l <= hi; ++l) {
      const double weight = w.chi(T * (lambda - sphere_lambda(l)));
      double s = 0.0;
      for (int m = -l; m <= l; ++m) {
        const auto idx = static_cast<std::size_t>(l * l + l + m);
        s += yx[idx] * yy[idx];
      }
      out.value += weight * s;
      out.terms += static_cast<std::size_t>(2 * l + 1);
    }
    for (int l = 0; l < lo; ++l)
      out.truncation_bound += w.chi(T * (lambda - sphere_lambda(l))) * (2 * l + 1) / (4 * kPi);
    for (int l = hi + 1; l <= hi + 400; ++l)
      out.truncation_bound += w.chi(T * (lambda - sphere_lambda(l))) * (2 * l + 1) / (4 * kPi);
    return out;
  }
  const double dx = x[0] - y[0], dy = x[1] - y[1];
  for (const auto& t : lattice_terms(w, lambda, T, kKernelTruncation, 1.0)) {
    out.value += t.weight * std::cos(t.k1 * dx + t.k2 * dy);
    ++out.terms;
  }
  // Shells beyond the band: about 2πn lattice points at radius n.
  const double top = lambda + band;
  for (int n = static_cast<int>(std::ceil(top)); n <= static_cast<int>(top) + 400; ++n)
    out.truncation_bound += w.chi(T * (lambda - n)) * (2 * kPi * n + 8) / kFourPiSq;
  for (int n = 0; n < static_cast<int>(lambda - band); ++n)
    out.truncation_bound += w.chi(T * (lambda - n)) * (2 * kPi * n + 8) / kFourPiSq;
  return out;
}

double zonal_kernel(const SchwartzWindow& w, double lambda, double distance, double T) {
  const double band = band_width(w, T);
  const int lo = sphere_degree_above(lambda - band);
  const int hi = sphere_degree_below(lambda + band);
  const double c = std::cos(distance);
  double p0 = 1.0, p1 = c, sum = 0.0;
  for (int l = 0; l <= hi; ++l) {
    double p;
    if (l == 0) {
      p = 1.0;
    } else if (l == 1) {
      p = c;
    } else {
      p = ((2.0 * l - 1.0) * c * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p;
    }
    if (l >= lo) sum += w.chi(T * (lambda - sphere_lambda(l))) * (2 * l + 1) / (4 * kPi) * p;
  }
  return sum;
}

double kernel_at_distance(const SurfaceModel& surface, const SchwartzWindow& w, double lambda,
                          double r, double T) {
  if (surface.kind == SurfaceKind::Sphere)
    return projector_kernel(surface, w, lambda, {0, 0, 1}, {std::sin(r), 0, std::cos(r)}, T).value;
  return projector_kernel(surface, w, lambda, {0, 0, 0}, {r, 0, 0}, T).value;
}

KernelScalingResult kernel_scaling_check(const SurfaceModel& surface, const SchwartzWindow& w,
                                         std::span<const double> lambdas,
                                         std::span<const double> radii) {
  KernelScalingResult out;
  auto kernel = [&](double lambda, double r) { return kernel_at_distance(surface, w, lambda, r); };
  for (double lambda : lambdas) {
    double c = 0.0;
    for (double r : radii) {
      if (r < 1.0 / lambda) throw std::invalid_argument("kernel_scaling_check: r below 1/lambda");
      KernelScalingRow row;
      row.lambda = lambda;
      row.r = r;
      row.kernel = kernel(lambda, r);
      row.ratio = std::abs(row.kernel) * std::sqrt(r / lambda);
      row.envelope = amplitude_envelope(kernel, lambda, r);
      c = std::max(c, row.envelope);
      out.rows.push_back(row);
    }
    out.constant_by_lambda.push_back(c);
    out.diagonal_by_lambda.push_back(kernel(lambda, 0.0) / lambda);
  }
  auto spread = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
  };
  out.spread = spread(out.constant_by_lambda);
  out.diagonal_spread = spread(out.diagonal_by_lambda);
  return out;
}

double autocorrelation(const TestWindowB& b, double u) {
  if (b.is_zero()) return 0.0;
  const double lo = std::max(b.lo(), b.lo() + u);
  const double hi = std::min(b.hi(), b.hi() + u);
  if (!(hi > lo)) return 0.0;
  const QuadratureRule rule = composite_gauss_legendre(lo, hi, 8, 16);
  return rule.integrate([&](double t) { return b(t) * b(t - u); });
}

double bilinear_geodesic_form(const SurfaceModel& surface, const SchwartzWindow& w,
                              double lambda, const SurfaceCurve& geodesic,
                              const TestWindowB& b, double T) {
  if (!geodesic.is_geodesic) throw std::invalid_argument("bilinear_geodesic_form: curve is not a geodesic");
  if (surface.kind != geodesic.kind) throw std::invalid_argument("bilinear_geodesic_form: surface mismatch");
  if (b.is_zero()) return 0.0;
  const double width = b.hi() - b.lo();
  if (!(width > 0.0)) return 0.0;
  const double band = band_width(w, T);
  const QuadratureRule rule = oscillatory_rule(0.0, width, lambda + band, 16);

  std::function<double(double)> kernel;
  std::vector<LatticeTerm> terms;
  double ux = 0.0, uy = 0.0;
  if (surface.kind == SurfaceKind::Sphere) {
    kernel = [&](double u) { return zonal_kernel(w, lambda, u, T); };
  } else {
    terms = lattice_terms(w, lambda, T, kKernelTruncation, 1.0);
    const Vec3 p0 = geodesic(0.0), p1 = geodesic(1.0);
    ux = p1[0] - p0[0];
    uy = p1[1] - p0[1];
    kernel = [&](double u) {
      double s = 0.0;
      for (const auto& t : terms) s += t.weight * std::cos(u * (t.k1 * ux + t.k2 * uy));
      return s;
    };
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    const double a = autocorrelation(b, u);
    if (a == 0.0) continue;
    sum += rule.weights[i] * a * kernel(u);
  }
  return 2.0 * sum;
}

double weighted_pairing_sum(const SurfaceModel& surface, const SchwartzWindow& w, double lambda,
                            const SurfaceCurve& curve, const TestWindowB& b, double T) {
  const double band = band_width(w, T);
  std::vector<EigenLevel> levels;
  for (const auto& e : enumerate_spectrum(surface, lambda + band))
    if (e.lambda >= lambda - band) levels.push_back(e);
  const auto values = period_integrals_all(levels, curve, b.lo(), b.hi(), &b);
  double sum = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j)
    sum += w.chi(T * (lambda - levels[j].lambda)) * values[j] * values[j];
  return sum;
}

double amplitude_pairing(const KernelAmplitudeModel& model, const TestWindowB& b) {
  const double lambda = model.lambda;
  const double width = b.hi() - b.lo();
  if (b.is_zero() || !(width > 0.0)) return 0.0;
  const double knee = std::min(1.0 / lambda, width);
  const double breaks[] = {0.0, knee, width};
  const double panel = 16.0 * 2.0 * kPi / (8.0 * lambda);
  const QuadratureRule rule = composite_gauss_legendre(breaks, std::min(panel, width / 16.0), 16);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    sum += rule.weights[i] * autocorrelation(b, u) * model.profile(u) *
           std::complex<double>(std::cos(lambda * u), std::sin(lambda * u));
  }
  return std::sqrt(lambda) * 2.0 * std::abs(sum);
}

std::complex<double> CircleFT::reconstruct() const {
  const std::complex<double> e(std::cos(y), std::sin(y));
  return (a_plus * e + a_minus * std::conj(e)) / std::sqrt(y);
}

CircleFT circle_ft(double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("circle_ft: y must be >= 0");
  CircleFT out;
  out.y = y;
  const double j0 = circle_mean(y);
  out.value = 2.0 * kPi * j0;
  if (y >= 1.0) {
    // Hankel split 2πJ₀ = π(H⁽¹⁾ + H⁽²⁾), H⁽¹⁾ = J₀ + iY₀.
    const std::complex<double> h1(j0, std::cyl_neumann(0.0, y));
    const std::complex<double> phase(std::cos(y), -std::sin(y));
    out.a_plus = kPi * std::sqrt(y) * h1 * phase;
    out.a_minus = std::conj(out.a_plus);
    out.has_amplitudes = true;
  }
  return out;
}

double free_plane_kernel(const SchwartzWindow& w, double T, double lambda, double rho) {
  const double band = band_width(w, T, kRadialTail);
  return radial_integral(std::max(0.0, lambda - band), lambda + band, 0.5 * T + rho, rho,
                         [&](double r) { return T * w.chi(T * (lambda - r)); });
}

ComparisonKernels comparison_kernels(const SchwartzWindow& w, const CutoffBeta& beta, double T,
                                     double lambda, double rho) {
  if (!(lambda >= 1.0) || !(rho >= 0.0))
    throw std::invalid_argument("comparison_kernels: need lambda >= 1 and rho >= 0");
  ComparisonKernels out;
  out.rho = rho;
  const double band = band_width(w, T, kRadialTail);
  out.k0_plus = free_plane_kernel(w, T, lambda, rho);
  out.k0_minus = radial_integral(0.0, std::max(0.0, band - lambda), 0.5 * T + rho, rho,
                                 [&](double r) { return T * w.chi(T * (lambda + r)); });
  out.k0 = out.k0_plus + out.k0_minus;

  const DerivedWindows d(w, beta, T, lambda + kDerivedTail + 1.0);
  const double lo = std::max(0.0, lambda - kDerivedTail);
  const double hi = lambda + kDerivedTail;
  const double freq = CutoffBeta::kSupport + 0.5 * T + rho;
  const std::size_t panels = panels_for_frequency(hi, freq, 8.0, 16, 8);
  const QuadratureRule rule = composite_gauss_legendre(0.0, hi, panels, 16);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    double psi = 0.0, phi = 0.0;
    if (r >= lo) {
      const auto [a, b] = d.psi_phi(lambda - r);
      psi += a;
      phi += b;
    }
    if (r + lambda <= hi) {
      const auto [a, b] = d.psi_phi(lambda + r);
      psi += a;
      phi += b;
    }
    const double j = rule.weights[i] * circle_mean(r * rho) * r / (2.0 * kPi);
    out.k1 += psi * j;
    out.k_phi += phi * j;
  }
  if (rho > 0.0) {
    out.envelope = amplitude_envelope(
        [&](double lam, double r) {
          return free_plane_kernel(w, T, lam, r) +
                 radial_integral(0.0, std::max(0.0, band - lam), 0.5 * T + r, r,
                                 [&](double s) { return T * w.chi(T * (lam + s)); });
        },
        lambda, rho);
  }
  return out;
}

UnfoldingCheck torus_unfolding_check(const SchwartzWindow& w, double T, double lambda,
                                     const Vec3& x, const Vec3& y, bool zero_image_only) {
  if (!(lambda >= 1.0) || !(T >= 1.0)) throw std::invalid_argument("torus_unfolding_check: need lambda, T >= 1");
  UnfoldingCheck out;
  const double dx = x[0] - y[0], dy = x[1] - y[1];
  for (const auto& t : lattice_terms(w, lambda, T, kRadialTail, T))
    out.eigen_side += t.weight * std::cos(t.k1 * dx + t.k2 * dy);

  // Beyond T/2 the free kernel is only the negative-frequency residue.
  const double reach = 0.5 * T + 1.0;
  const int mmax = static_cast<int>(std::ceil((reach + std::hypot(dx, dy)) / (2.0 * kPi))) + 1;
  for (int m1 = -mmax; m1 <= mmax; ++m1) {
    for (int m2 = -mmax; m2 <= mmax; ++m2) {
      if (zero_image_only && (m1 != 0 || m2 != 0)) continue;
      const double rho = std::hypot(dx + 2.0 * kPi * m1, dy + 2.0 * kPi * m2);
      if (rho > reach) continue;
      out.image_side += free_plane_kernel(w, T, lambda, rho);
      ++out.images;
    }
  }
  out.relative_error = std::abs(out.eigen_side - out.image_side) / std::abs(out.eigen_side);
  return out;
}

}  // namespace geoint
