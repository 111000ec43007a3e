#include "geoint/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <numbers>
#include <stdexcept>

#include "geoint/quadrature.hpp"

namespace geoint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRescale = 1e150;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 normalized(const Vec3& v) {
  const double n = norm3(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

double sphere_harmonic(int l, int m, const Vec3& p) {
  const int am = std::abs(m);
  const double x = std::clamp(p[2], -1.0, 1.0);
  const std::vector<double> column = normalized_legendre_column(l, am, x);
  const double plm = column.back();
  if (m == 0) return plm;
  const double phi = std::atan2(p[1], p[0]);
  const double trig = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
  return std::numbers::sqrt2 * plm * trig;
}

}  // namespace

double SurfaceModel::volume() const {
  return kind == SurfaceKind::Sphere ? 4.0 * std::numbers::pi : kTwoPi * kTwoPi;
}

std::string SurfaceModel::name() const {
  return kind == SurfaceKind::Sphere ? "sphere" : "torus";
}

SurfaceModel sphere() { return {SurfaceKind::Sphere}; }
SurfaceModel flat_torus() { return {SurfaceKind::FlatTorus}; }

long EigenLevel::eigenspace() const {
  if (kind == SurfaceKind::Sphere) return sphere.degree;
  return static_cast<long>(torus.k1) * torus.k1 + static_cast<long>(torus.k2) * torus.k2;
}

std::vector<EigenLevel> enumerate_spectrum(const SurfaceModel& surface, double lambda_max) {
  if (!(lambda_max >= 0.0)) throw std::invalid_argument("enumerate_spectrum: negative lambda_max");
  std::vector<EigenLevel> out;
  if (surface.kind == SurfaceKind::Sphere) {
    for (int l = 0;; ++l) {
      const double lambda = std::sqrt(static_cast<double>(l) * (l + 1));
      if (lambda > lambda_max) break;
      for (int m = -l; m <= l; ++m) {
        EigenLevel e;
        e.kind = SurfaceKind::Sphere;
        e.lambda = lambda;
        e.sphere = {l, m};
        out.push_back(e);
      }
    }
  } else {
    const int kmax = static_cast<int>(std::floor(lambda_max));
    const double limit = lambda_max * lambda_max;
    for (int k1 = 0; k1 <= kmax; ++k1) {
      for (int k2 = -kmax; k2 <= kmax; ++k2) {
        const double n2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        if (n2 > limit) continue;
        if (k1 == 0 && k2 < 0) continue;
        EigenLevel e;
        e.kind = SurfaceKind::FlatTorus;
        e.lambda = std::sqrt(n2);
        if (k1 == 0 && k2 == 0) {
          e.torus = {0, 0, TorusMode::Constant};
          out.push_back(e);
          continue;
        }
        e.torus = {k1, k2, TorusMode::Cosine};
        out.push_back(e);
        e.torus.mode = TorusMode::Sine;
        out.push_back(e);
      }
    }
    std::sort(out.begin(), out.end(), [](const EigenLevel& a, const EigenLevel& b) {
      const long na = a.eigenspace(), nb = b.eigenspace();
      if (na != nb) return na < nb;
      if (a.torus.k1 != b.torus.k1) return a.torus.k1 < b.torus.k1;
      if (a.torus.k2 != b.torus.k2) return a.torus.k2 < b.torus.k2;
      return a.torus.mode < b.torus.mode;
    });
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> eigenspace_ranges(
    std::span<const EigenLevel> levels) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= levels.size(); ++i) {
    if (i == levels.size() || levels[i].eigenspace() != levels[begin].eigenspace()) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

std::vector<double> normalized_legendre_column(int lmax, int m, double x) {
  if (m < 0 || lmax < m) throw std::invalid_argument("normalized_legendre_column: need 0 <= m <= lmax");
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  // log |P̄_m^m| with P̄_0^0 = 1/sqrt(4π), sign (-1)^m.
  double log_scale = -0.5 * std::log(4.0 * std::numbers::pi);
  for (int k = 1; k <= m; ++k) log_scale += 0.5 * std::log((2.0 * k + 1.0) / (2.0 * k));
  std::vector<double> out(static_cast<std::size_t>(lmax - m + 1), 0.0);
  if (m > 0 && s == 0.0) return out;
  if (m > 0) log_scale += m * std::log(s);
  double prev = 0.0;
  double cur = (m % 2 == 0) ? 1.0 : -1.0;
  out[0] = cur * std::exp(log_scale);
  for (int l = m + 1; l <= lmax; ++l) {
    const double ll = l, mm = m;
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
    const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += std::log(kRescale);
    }
    out[static_cast<std::size_t>(l - m)] = cur * std::exp(log_scale);
  }
  return out;
}

void spherical_harmonics_all(int lmax, const Vec3& point, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>((lmax + 1) * (lmax + 1)), 0.0);
  const double x = std::clamp(point[2], -1.0, 1.0);
  const double phi = std::atan2(point[1], point[0]);
  for (int m = 0; m <= lmax; ++m) {
    const std::vector<double> column = normalized_legendre_column(lmax, m, x);
    const double c = std::cos(m * phi), sn = std::sin(m * phi);
    for (int l = m; l <= lmax; ++l) {
      const double p = column[static_cast<std::size_t>(l - m)];
      const auto base = static_cast<std::size_t>(l * l + l);
      if (m == 0) {
        out[base] = p;
      } else {
        out[base + static_cast<std::size_t>(m)] = std::numbers::sqrt2 * p * c;
        out[base - static_cast<std::size_t>(m)] = std::numbers::sqrt2 * p * sn;
      }
    }
  }
}

double eval_eigenfunction(const EigenLevel& level, const Vec3& point) {
  if (level.kind == SurfaceKind::Sphere) return sphere_harmonic(level.sphere.degree, level.sphere.order, point);
  const TorusLabel& k = level.torus;
  if (k.mode == TorusMode::Constant) return 1.0 / kTwoPi;
  const double arg = k.k1 * point[0] + k.k2 * point[1];
  const double amp = 1.0 / (std::numbers::pi * std::numbers::sqrt2);
  return amp * (k.mode == TorusMode::Cosine ? std::cos(arg) : std::sin(arg));
}

SurfaceCurve great_circle(const Vec3& axis) {
  const Vec3 n = normalized(axis);
  Vec3 seed = std::abs(n[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const double d = seed[0] * n[0] + seed[1] * n[1] + seed[2] * n[2];
  const Vec3 e1 = normalized({seed[0] - d * n[0], seed[1] - d * n[1], seed[2] - d * n[2]});
  const Vec3 e2 = {n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2],
                   n[0] * e1[1] - n[1] * e1[0]};
  SurfaceCurve c;
  c.kind = SurfaceKind::Sphere;
  c.length = kTwoPi;
  c.periodic = true;
  c.is_geodesic = true;
  c.eval = [e1, e2](double t) {
    const double ct = std::cos(t), st = std::sin(t);
    return Vec3{ct * e1[0] + st * e2[0], ct * e1[1] + st * e2[1], ct * e1[2] + st * e2[2]};
  };
  return c;
}

SurfaceCurve torus_line(const Vec3& point, double dx, double dy) {
  const double n = std::hypot(dx, dy);
  if (!(n > 0.0)) throw std::invalid_argument("torus_line: zero direction");
  dx /= n;
  dy /= n;
  SurfaceCurve c;
  c.kind = SurfaceKind::FlatTorus;
  c.is_geodesic = true;
  // Smallest coprime (p, q) parallel to the direction.
  for (int s = 1; s <= 2000 && !c.periodic; ++s) {
    for (int q = 0; q <= s; ++q) {
      const int p = s - q;
      for (int sp : {1, -1}) {
        for (int sq : {1, -1}) {
          const double pp = sp * p, qq = sq * q;
          const double len = std::hypot(pp, qq);
          if (std::abs(pp / len - dx) < 1e-12 && std::abs(qq / len - dy) < 1e-12 &&
              std::gcd(p, q) == 1 && std::max(p, q) <= 1000) {
            c.periodic = true;
            c.length = kTwoPi * len;
          }
        }
      }
      if (c.periodic) break;
    }
  }
  const double x0 = point[0], y0 = point[1];
  c.eval = [x0, y0, dx, dy](double t) { return Vec3{x0 + t * dx, y0 + t * dy, 0.0}; };
  return c;
}

namespace {

// Arc-length table for the perturbed equator; maps arc length back to the
// angle parameter by Newton on a per-panel Gauss-Legendre integral.
struct PerturbedEquator {
  double amp;
  std::vector<double> knots;   // angle breakpoints
  std::vector<double> arc;     // arc length at knots
  double period = 0.0;

  explicit PerturbedEquator(double a) : amp(a) {
    const std::size_t panels = 1024;
    knots.resize(panels + 1);
    arc.resize(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i)
      knots[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(panels);
    arc[0] = 0.0;
    for (std::size_t i = 0; i < panels; ++i) arc[i + 1] = arc[i] + arc_between(knots[i], knots[i + 1]);
    period = arc.back();
  }

  double delta(double u) const { return amp * std::sin(2.0 * u); }
  double speed(double u) const {
    const double d = delta(u);
    const double dp = 2.0 * amp * std::cos(2.0 * u);
    const double c = std::cos(d);
    return std::sqrt(dp * dp + c * c);
  }
  double arc_between(double a, double b) const {
    const QuadratureRule& gl = gauss_legendre(20);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) s += gl.weights[i] * speed(m + h * gl.nodes[i]);
    return h * s;
  }
  double angle_at(double t) const {
    const double turns = std::floor(t / period);
    const double r = t - turns * period;
    auto it = std::upper_bound(arc.begin(), arc.end(), r);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - arc.begin() - 1));
    k = std::min(k, knots.size() - 2);
    double u = knots[k] + (r - arc[k]) / speed(knots[k]);
    for (int iter = 0; iter < 30; ++iter) {
      const double f = arc[k] + arc_between(knots[k], u) - r;
      const double du = f / speed(u);
      u -= du;
      if (std::abs(du) < 1e-15) break;
    }
    return u + turns * kTwoPi;
  }
  Vec3 point(double u) const {
    const double d = delta(u);
    return {std::cos(d) * std::cos(u), std::cos(d) * std::sin(u), std::sin(d)};
  }
};

}  // namespace

SurfaceCurve perturbed_equator(double amplitude) {
  auto table = std::make_shared<const PerturbedEquator>(amplitude);
  SurfaceCurve c;
  c.kind = SurfaceKind::Sphere;
  c.length = table->period;
  c.periodic = true;
  c.is_geodesic = amplitude == 0.0;
  c.eval = [table](double t) { return table->point(table->angle_at(t)); };
  return c;
}

double geodesic_distance(const SurfaceModel& surface, const Vec3& x, const Vec3& y) {
  if (surface.kind == SurfaceKind::Sphere) {
    const Vec3 cr = {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
    const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    return std::atan2(norm3(cr), dot);
  }
  const double dx = wrap_angle(x[0] - y[0]);
  const double dy = wrap_angle(x[1] - y[1]);
  double best = std::numeric_limits<double>::infinity();
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) best = std::min(best, std::hypot(dx + i * kTwoPi, dy + j * kTwoPi));
  return best;
}

}  // namespace geoint
