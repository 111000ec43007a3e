#include "geoint/hyperbolic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace geoint {

double minkowski(const HVec& a, const HVec& b) { return a[0] * b[0] - a[1] * b[1] - a[2] * b[2]; }

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return c;
}

HVec mat_apply(const Mat3& m, const HVec& v) {
  HVec r{};
  for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return r;
}

Mat3 identity3() { return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

Mat3 lorentz_inverse(const Mat3& m) {
  static constexpr double kSign[3] = {1.0, -1.0, -1.0};
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = kSign[i] * m[j][i] * kSign[j];
  return r;
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

double lorentz_residual(const Mat3& m) {
  static constexpr double kSign[3] = {1.0, -1.0, -1.0};
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[k][i] * kSign[k] * m[k][j];
      d = std::max(d, std::abs(s - (i == j ? kSign[i] : 0.0)));
    }
  return d;
}

Mat3 rotation_about_origin(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{{1.0, 0.0, 0.0}, {0.0, c, -s}, {0.0, s, c}}};
}

Mat3 translation_along_x1(double length) {
  const double c = std::cosh(length), s = std::sinh(length);
  return {{{c, s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

// ---------------------------------------------------------------------------

HPoint HPoint::from_spatial(double x1, double x2) {
  return {{std::sqrt(1.0 + x1 * x1 + x2 * x2), x1, x2}};
}

HPoint HPoint::normalized(const HVec& v) {
  const double n = minkowski(v, v);
  if (!(n > 0.0)) throw std::domain_error("HPoint: vector is not timelike");
  const double scale = (v[0] > 0.0 ? 1.0 : -1.0) / std::sqrt(n);
  return from_spatial(v[1] * scale, v[2] * scale);
}

HPoint HPoint::polar(double r, double angle) {
  const double s = std::sinh(r);
  return {{std::cosh(r), s * std::cos(angle), s * std::sin(angle)}};
}

HPoint HPoint::from_disc(double u, double v) {
  const double r2 = u * u + v * v;
  if (!(r2 < 1.0)) throw std::domain_error("HPoint::from_disc: point outside the unit disc");
  const double k = 1.0 / (1.0 - r2);
  return {{(1.0 + r2) * k, 2.0 * u * k, 2.0 * v * k}};
}

std::array<double, 2> HPoint::to_disc() const { return {x[1] / (1.0 + x[0]), x[2] / (1.0 + x[0])}; }

std::array<double, 2> HPoint::to_klein() const { return {x[1] / x[0], x[2] / x[0]}; }

double HPoint::constraint_residual() const { return std::abs(minkowski(x, x) - 1.0); }

double hyp_distance(const HPoint& p, const HPoint& q) {
  if (minkowski(p.x, q.x) < 1.0 - 1e-9)
    throw std::domain_error("hyp_distance: pairing below 1, points are off the hyperboloid");
  // -⟨p-q,p-q⟩ = 2(cosh d - 1), which keeps precision for nearby points.
  const HVec d{p.x[0] - q.x[0], p.x[1] - q.x[1], p.x[2] - q.x[2]};
  const double m = std::max(0.0, -minkowski(d, d));
  return 2.0 * std::asinh(0.5 * std::sqrt(m));
}

// ---------------------------------------------------------------------------

namespace {

std::string compose_words(const std::string& left, const std::string& right) {
  std::string out = left;
  std::size_t i = 0;
  while (!out.empty() && i < right.size() && out.back() != right[i] &&
         std::tolower(out.back()) == std::tolower(right[i])) {
    out.pop_back();
    ++i;
  }
  out.append(right, i, std::string::npos);
  return out;
}

double displacement_of(const Mat3& m) { return std::acosh(std::max(1.0, m[0][0])); }

}  // namespace

std::string inverse_word(const std::string& word) {
  std::string out(word.rbegin(), word.rend());
  for (char& ch : out) ch = std::islower(ch) ? static_cast<char>(std::toupper(ch)) : static_cast<char>(std::tolower(ch));
  return out;
}

DeckTransform DeckTransform::from_matrix(const Mat3& m, std::string word) {
  return {m, std::move(word), displacement_of(m)};
}

HPoint DeckTransform::apply(const HPoint& p) const { return HPoint::normalized(mat_apply(matrix, p.x)); }

HVec DeckTransform::apply(const HVec& v) const { return mat_apply(matrix, v); }

DeckTransform DeckTransform::inverse() const {
  return {lorentz_inverse(matrix), inverse_word(word), displacement};
}

DeckTransform DeckTransform::operator*(const DeckTransform& other) const {
  return from_matrix(mat_mul(matrix, other.matrix), compose_words(word, other.word));
}

double DeckTransform::translation_length() const {
  const double c = 0.5 * (matrix[0][0] + matrix[1][1] + matrix[2][2] - 1.0);
  return c > 1.0 ? std::acosh(c) : 0.0;
}

bool DeckTransform::is_identity(double tol) const { return max_abs_diff(matrix, identity3()) < tol; }

// ---------------------------------------------------------------------------

namespace {

using LMat = std::array<std::array<long double, 3>, 3>;

LMat widen(const Mat3& m) {
  LMat r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j];
  return r;
}

LMat lmul(const LMat& a, const LMat& b) {
  LMat c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return c;
}

// Product of generator letters in extended precision; long words of large
// translations lose ~1e-5 to cancellation in double.
double word_residual(const FuchsianGroup& g, const std::string& word) {
  LMat m = widen(identity3());
  for (char ch : word) {
    const std::size_t k = std::islower(ch) ? static_cast<std::size_t>(ch - 'a')
                                           : 4 + static_cast<std::size_t>(ch - 'A');
    m = lmul(m, widen(g.generators.at(k).matrix));
  }
  long double d = 0.0L;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(m[i][j] - (i == j ? 1.0L : 0.0L)));
  return static_cast<double>(d);
}

std::string commutator(const std::string& x, const std::string& y) {
  return x + y + inverse_word(x) + inverse_word(y);
}

}  // namespace

double FuchsianGroup::relation_residual() const {
  // aBcDAbCd = [x₁,x₂][x₂x₁x₃, x₄x₁⁻¹x₂⁻¹] with (x₁,x₂,x₃,x₄) = (a,B,c,D).
  return word_residual(*this, commutator("a", "B") + commutator("Bac", "DAb"));
}

double FuchsianGroup::vertex_relation_residual() const { return word_residual(*this, "aBcDAbCd"); }

FuchsianGroup bolza_group() {
  FuchsianGroup g;
  const double inradius = std::acosh(1.0 + std::numbers::sqrt2);
  g.side_pairing_length = 2.0 * inradius;
  g.circumradius = std::acosh((1.0 + std::numbers::sqrt2) * (1.0 + std::numbers::sqrt2));
  const Mat3 shift = translation_along_x1(g.side_pairing_length);
  std::vector<DeckTransform> forward;
  for (int k = 0; k < 4; ++k) {
    const double angle = k * std::numbers::pi / 4.0;
    const Mat3 m = mat_mul(rotation_about_origin(angle), mat_mul(shift, rotation_about_origin(-angle)));
    forward.push_back(DeckTransform::from_matrix(m, std::string(1, static_cast<char>('a' + k))));
  }
  g.generators = forward;
  for (const auto& f : forward) g.generators.push_back(f.inverse());
  return g;
}

// ---------------------------------------------------------------------------

namespace {

struct CellKey {
  long long i, j;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<long long>()(k.i * 1000003LL) ^ std::hash<long long>()(k.j);
  }
};

struct Node {
  Mat3 m;
  std::size_t parent;
  std::size_t generator;
  std::size_t depth;
  double displacement;
};

// Orbit points α·O of distinct elements are ≥ one systole apart, so a
// 0.01-grid in (x₁,x₂) with a 3×3 neighbourhood finds any duplicate.
constexpr double kCell = 0.01;

CellKey cell_of(const Mat3& m, long long di = 0, long long dj = 0) {
  return {std::llround(m[1][0] / kCell) + di, std::llround(m[2][0] / kCell) + dj};
}

std::string word_of(const std::vector<Node>& nodes, std::size_t k) {
  static constexpr char kLetters[] = "abcdABCD";
  std::string w;
  while (k != 0) {
    w.push_back(kLetters[nodes[k].generator]);
    k = nodes[k].parent;
  }
  return {w.rbegin(), w.rend()};
}

}  // namespace

std::vector<DeckTransform> enumerate_deck(const FuchsianGroup& group, double T,
                                          const EnumerationOptions& options) {
  if (!(T >= 0.0)) throw std::invalid_argument("enumerate_deck: T must be non-negative");
  if (T > 25.0) throw std::invalid_argument("enumerate_deck: T > 25 would enumerate too many elements");
  const double prune = T + options.prune_margin.value_or(group.circumradius);

  std::vector<Node> nodes{{identity3(), 0, 0, 0, 0.0}};
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells;
  cells[cell_of(nodes[0].m)].push_back(0);
  auto known = [&](const Mat3& m) {
    const double tol = 1e-6 * std::max(1.0, m[0][0]);
    for (long long di = -1; di <= 1; ++di)
      for (long long dj = -1; dj <= 1; ++dj) {
        auto it = cells.find(cell_of(m, di, dj));
        if (it == cells.end()) continue;
        for (std::size_t k : it->second)
          if (max_abs_diff(nodes[k].m, m) < tol) return true;
      }
    return false;
  };

  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if (nodes[head].depth >= options.max_word_length) continue;
    for (std::size_t g = 0; g < group.generators.size(); ++g) {
      const Mat3 m = mat_mul(nodes[head].m, group.generators[g].matrix);
      const double disp = displacement_of(m);
      if (disp > prune || known(m)) continue;
      cells[cell_of(m)].push_back(nodes.size());
      nodes.push_back({m, head, g, nodes[head].depth + 1, disp});
    }
  }

  std::vector<DeckTransform> out;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].displacement <= T) out.push_back({nodes[k].m, word_of(nodes, k), nodes[k].displacement});
  std::stable_sort(out.begin(), out.end(), [](const DeckTransform& x, const DeckTransform& y) {
    if (std::abs(x.displacement - y.displacement) > 1e-9) return x.displacement < y.displacement;
    if (x.word.size() != y.word.size()) return x.word.size() < y.word.size();
    return x.word < y.word;
  });
  return out;
}

ClosureCertificate enumeration_closure(const FuchsianGroup& group, double T) {
  const auto full = enumerate_deck(group, T);
  ClosureCertificate c;
  c.count = full.size();
  for (const auto& e : full) c.word_length = std::max(c.word_length, e.word.size());
  auto same = [&](const std::vector<DeckTransform>& other) {
    if (other.size() != full.size()) return false;
    for (std::size_t k = 0; k < full.size(); ++k)
      if (max_abs_diff(other[k].matrix, full[k].matrix) > 1e-6 * std::max(1.0, full[k].matrix[0][0]))
        return false;
    return true;
  };
  EnumerationOptions opts;
  opts.max_word_length = c.word_length;
  const bool at_l = same(enumerate_deck(group, T, opts));
  opts.max_word_length = c.word_length + 2;
  c.stable = at_l && same(enumerate_deck(group, T, opts));
  return c;
}

double minimum_displacement(std::span<const DeckTransform> elements) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : elements)
    if (!e.is_identity()) best = std::min(best, e.displacement);
  return best;
}

DirichletMembership dirichlet_classify(const FuchsianGroup& group, const HPoint& p, double T_check) {
  const double r = hyp_distance(group.basepoint, p);
  if (T_check < 2.0 * r + group.side_pairing_length - 1e-12)
    throw std::invalid_argument("dirichlet_classify: T_check below 2·d(O,p) + systole");
  bool tie = false;
  for (const auto& alpha : enumerate_deck(group, T_check)) {
    if (alpha.is_identity()) continue;
    const double d = hyp_distance(group.basepoint, alpha.apply(p));
    if (d < r - 1e-9) return DirichletMembership::Outside;
    if (d <= r + 1e-9) tie = true;
  }
  return tie ? DirichletMembership::Boundary : DirichletMembership::Inside;
}

bool dirichlet_contains(const FuchsianGroup& group, const HPoint& p, double T_check) {
  return dirichlet_classify(group, p, T_check) == DirichletMembership::Inside;
}

// ---------------------------------------------------------------------------

namespace {

HVec cross(const HVec& a, const HVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

HVec lower(const HVec& v) { return {v[0], -v[1], -v[2]}; }

}  // namespace

HGeodesic HGeodesic::through(const HPoint& p, double angle) {
  const double x0 = p.x[0], x1 = p.x[1], x2 = p.x[2];
  const double k = 1.0 / (1.0 + x0);
  const double c = std::cos(angle), s = std::sin(angle);
  // Pure translation taking O to p, applied to (0, cos, sin).
  const HVec v{x1 * c + x2 * s, (1.0 + x1 * x1 * k) * c + x1 * x2 * k * s,
               x1 * x2 * k * c + (1.0 + x2 * x2 * k) * s};
  return {p.x, v};
}

HGeodesic HGeodesic::between(const HPoint& p, const HPoint& q) {
  const double b = minkowski(p.x, q.x);
  const double n = std::sqrt(std::max(0.0, b * b - 1.0));
  if (!(n > 0.0)) throw std::invalid_argument("HGeodesic::between: points coincide");
  return {p.x, {(q.x[0] - b * p.x[0]) / n, (q.x[1] - b * p.x[1]) / n, (q.x[2] - b * p.x[2]) / n}};
}

HPoint HGeodesic::operator()(double t) const {
  // cosh² − sinh² cancels for large t; lift the spatial part instead.
  const double c = std::cosh(t), s = std::sinh(t);
  return HPoint::from_spatial(c * base[1] + s * tangent[1], c * base[2] + s * tangent[2]);
}

HVec HGeodesic::velocity(double t) const {
  const double c = std::cosh(t), s = std::sinh(t);
  return {s * base[0] + c * tangent[0], s * base[1] + c * tangent[1], s * base[2] + c * tangent[2]};
}

HGeodesic HGeodesic::transformed(const DeckTransform& alpha) const {
  return {alpha.apply(base), alpha.apply(tangent)};
}

HVec HGeodesic::plane_normal() const {
  HVec n = lower(cross(base, tangent));
  const double k = 1.0 / std::sqrt(-minkowski(n, n));
  for (double& c : n) c *= k;
  return n;
}

double HGeodesic::unit_speed_residual() const {
  return std::max({std::abs(minkowski(base, base) - 1.0), std::abs(minkowski(tangent, tangent) + 1.0),
                   std::abs(minkowski(base, tangent))});
}

std::optional<double> common_perpendicular_length(const HGeodesic& g1, const HGeodesic& g2) {
  const double c = std::abs(minkowski(g1.plane_normal(), g2.plane_normal()));
  if (c <= 1.0 + 1e-14) return std::nullopt;
  return std::acosh(c);
}

std::optional<std::array<double, 2>> geodesic_crossing(const HGeodesic& g1, const HGeodesic& g2) {
  HVec d = cross(lower(g1.plane_normal()), lower(g2.plane_normal()));
  const double n = minkowski(d, d);
  if (!(n > 1e-300)) return std::nullopt;
  const double k = (d[0] > 0.0 ? 1.0 : -1.0) / std::sqrt(n);
  for (double& c : d) c *= k;
  return std::array<double, 2>{std::asinh(-minkowski(d, g1.tangent)), std::asinh(-minkowski(d, g2.tangent))};
}

DeckTransform axis_translation(const HGeodesic& axis, double length) {
  const HVec e0 = axis.base, e1 = axis.tangent, e2 = axis.plane_normal();
  const double c = std::cosh(length), s = std::sinh(length);
  // x = Σ cᵢeᵢ with c = G Eᵀ J x; the boost acts on (c₀, c₁).
  Mat3 m{};
  const HVec l0 = lower(e0), l1 = lower(e1), l2 = lower(e2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double c0 = l0[j], c1 = -l1[j], c2 = -l2[j];
      m[i][j] = e0[i] * (c * c0 + s * c1) + e1[i] * (s * c0 + c * c1) + e2[i] * c2;
    }
  return DeckTransform::from_matrix(m, "");
}

namespace {

// Null vector of M − μI, from the cross product of its two largest rows.
HVec eigenvector(const Mat3& m, double mu) {
  Mat3 a = m;
  for (int i = 0; i < 3; ++i) a[i][i] -= mu;
  HVec best{};
  double norm = -1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const HVec c = cross(a[i], a[j]);
      const double n = std::hypot(c[0], c[1], c[2]);
      if (n > norm) norm = n, best = c;
    }
  const double k = (best[0] > 0.0 ? 1.0 : -1.0) / norm;
  for (double& c : best) c *= k;
  return best;
}

}  // namespace

std::optional<HGeodesic> translation_axis(const DeckTransform& alpha) {
  const double len = alpha.translation_length();
  if (!(len > 1e-9)) return std::nullopt;
  // Light-like eigenvectors for e^{±ℓ}; their sum is timelike and on the axis.
  const HVec up = eigenvector(alpha.matrix, std::exp(len));
  const HVec down = eigenvector(alpha.matrix, std::exp(-len));
  const HPoint p = HPoint::normalized({up[0] + down[0], up[1] + down[1], up[2] + down[2]});
  HGeodesic axis = HGeodesic::between(p, alpha.apply(p));
  return axis;
}

StabilizerResult stabilizer_test(const DeckTransform& alpha, const HGeodesic& geodesic, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("stabilizer_test: period must be positive");
  StabilizerResult r;
  if (alpha.is_identity()) {
    r.identity = true;
    return r;
  }
  r.residual = std::numeric_limits<double>::infinity();
  for (int k : {1, -1, 2, -2, 3, -3, 4, -4, 5, -5}) {
    double worst = 0.0;
    for (double s : {-0.5, 0.0, 0.5})
      worst = std::max(worst, hyp_distance(alpha.apply(geodesic(s)), geodesic(s + k * period)));
    r.residual = std::min(r.residual, worst);
    if (worst < 1e-8) {
      r.shift = k;
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

PhaseFunction::PhaseFunction(HGeodesic first, DeckTransform alpha, HGeodesic second)
    : first_(first), alpha_(std::move(alpha)), second_(second), image_(second.transformed(alpha_)) {}

Jet2 PhaseFunction::jet(double t, double s) const {
  const double ct = std::cosh(t), st = std::sinh(t), cs = std::cosh(s), ss = std::sinh(s);
  HVec p, pt, q, qs;
  for (int i = 0; i < 3; ++i) {
    p[i] = ct * first_.base[i] + st * first_.tangent[i];
    pt[i] = st * first_.base[i] + ct * first_.tangent[i];
    q[i] = cs * image_.base[i] + ss * image_.tangent[i];
    qs[i] = ss * image_.base[i] + cs * image_.tangent[i];
  }
  const HVec diff{p[0] - q[0], p[1] - q[1], p[2] - q[2]};
  const double m = std::max(0.0, -minkowski(diff, diff));  // 2(B − 1)
  const double b = 1.0 + 0.5 * m;
  const double d2 = 0.5 * m * (2.0 + 0.5 * m);             // B² − 1
  const double d = std::sqrt(d2);
  const double bt = minkowski(pt, q), bs = minkowski(p, qs), bts = minkowski(pt, qs);
  Jet2 j;
  j.value = 2.0 * std::asinh(0.5 * std::sqrt(m));
  j.dt = bt / d;
  j.ds = bs / d;
  const double d3 = d2 * d;
  j.dtt = b / d - b * bt * bt / d3;
  j.dss = b / d - b * bs * bs / d3;
  j.dts = bts / d - b * bt * bs / d3;
  return j;
}

double PhaseFunction::operator()(double t, double s) const { return hyp_distance(first_(t), image_(s)); }

std::array<double, 2> PhaseFunction::grad(double t, double s) const {
  const Jet2 j = jet(t, s);
  return {j.dt, j.ds};
}

double min_separation(const PhaseFunction& phase, const Rect& box) {
  if (auto x = geodesic_crossing(phase.first(), phase.image()); x && box.contains((*x)[0], (*x)[1]))
    return 0.0;
  double best = std::numeric_limits<double>::infinity();
  constexpr int n = 65;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      best = std::min(best, phase(box.t0 + a * box.width_t() / (n - 1), box.s0 + b * box.width_s() / (n - 1)));
  return best;
}

std::vector<CriticalPoint> find_critical_points(const PhaseFunction& phase, const Rect& box,
                                                const NewtonOptions& options) {
  if (min_separation(phase, box) < 1e-3)
    throw std::invalid_argument("find_critical_points: geodesics come within 1e-3 on the domain");
  std::vector<CriticalPoint> out;
  for (const auto& p : stationary_points([&](double t, double s) { return phase.jet(t, s); }, box, options))
    out.push_back({p.t, p.s, p.jet.value, p.jet.dts, p.jet.grad_norm()});
  return out;
}

double quadrilateral_angle_defect(const HPoint& p1, const HPoint& p2, const HPoint& p3, const HPoint& p4) {
  const std::array<const HPoint*, 4> v{&p1, &p2, &p3, &p4};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (hyp_distance(*v[i], *v[j]) < 1e-3)
        throw std::invalid_argument("quadrilateral_angle_defect: vertices closer than 1e-3");
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const auto a = v[i]->to_klein(), b = v[(i + 1) % 4]->to_klein(), c = v[(i + 2) % 4]->to_klein();
    const double turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    const int here = turn > 1e-15 ? 1 : (turn < -1e-15 ? -1 : 0);
    if (here == 0 || (sign != 0 && here != sign))
      throw std::invalid_argument("quadrilateral_angle_defect: vertices not in convex position");
    sign = here;
  }
  double angles = 0.0;
  for (int i = 0; i < 4; ++i) {
    const HVec& x = v[i]->x;
    const HVec& a = v[(i + 3) % 4]->x;
    const HVec& b = v[(i + 1) % 4]->x;
    const double ba = minkowski(x, a), bb = minkowski(x, b);
    const HVec ua{a[0] - ba * x[0], a[1] - ba * x[1], a[2] - ba * x[2]};
    const HVec ub{b[0] - bb * x[0], b[1] - bb * x[1], b[2] - bb * x[2]};
    const double c = -minkowski(ua, ub) / std::sqrt(minkowski(ua, ua) * minkowski(ub, ub));
    angles += std::acos(std::clamp(c, -1.0, 1.0));
  }
  return 2.0 * std::numbers::pi - angles;
}

}  // namespace geoint
