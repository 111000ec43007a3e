#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "geoint/hyperbolic.hpp"

using namespace geoint;

namespace {

const double kSide = 2.0 * std::acosh(1.0 + std::numbers::sqrt2);

HGeodesic x1_axis() { return {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}; }

// Geodesic orthogonal to the x₁-axis at axis parameter u, re-based so that
// its foot on the axis sits at parameter `foot`.
HGeodesic perpendicular(double u, double foot) {
  const HGeodesic axis = x1_axis();
  const HGeodesic g{axis(u).x, {0.0, 0.0, 1.0}};
  return {g(-foot).x, g.velocity(-foot)};
}

// Hyperbolic L'Huilier: tan(A/4)² = tanh(s/2)tanh((s-a)/2)tanh((s-b)/2)tanh((s-c)/2).
double triangle_area(const HPoint& p, const HPoint& q, const HPoint& r) {
  const double a = hyp_distance(q, r), b = hyp_distance(p, r), c = hyp_distance(p, q);
  const double s = 0.5 * (a + b + c);
  const double v = std::tanh(s / 2) * std::tanh((s - a) / 2) * std::tanh((s - b) / 2) * std::tanh((s - c) / 2);
  return 4.0 * std::atan(std::sqrt(v));
}

struct GridMin {
  double t, s, value;
};

// Dense-grid minimum of φ with three zoomed refinements.
GridMin grid_minimum(const PhaseFunction& phi, int n = 512) {
  double t0 = -0.5, t1 = 0.5, s0 = -0.5, s1 = 0.5;
  GridMin best{0, 0, INFINITY};
  for (int round = 0; round < 4; ++round) {
    const int m = round == 0 ? n : 64;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double t = t0 + (t1 - t0) * a / (m - 1), s = s0 + (s1 - s0) * b / (m - 1);
        const double v = phi(t, s);
        if (v < best.value) best = {t, s, v};
      }
    const double ht = 2.0 * (t1 - t0) / (m - 1), hs = 2.0 * (s1 - s0) / (m - 1);
    t0 = best.t - ht, t1 = best.t + ht, s0 = best.s - hs, s1 = best.s + hs;
  }
  return best;
}

}  // namespace

TEST_CASE("distance: basic values and metric axioms") {
  CHECK(hyp_distance(HPoint::origin(), HPoint::origin()) == doctest::Approx(0.0));
  const HPoint half = HPoint::from_disc(0.5, 0.0);
  CHECK(hyp_distance(HPoint::origin(), half) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  const auto z = half.to_disc();
  CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS(HPoint::from_disc(1.0, 0.0));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> r(0.0, 3.0), ang(0.0, 2 * std::numbers::pi);
  for (int k = 0; k < 100; ++k) {
    const HPoint p = HPoint::polar(r(rng), ang(rng)), q = HPoint::polar(r(rng), ang(rng)),
                 w = HPoint::polar(r(rng), ang(rng));
    CHECK(p.constraint_residual() < 1e-10);
    CHECK(hyp_distance(p, q) == doctest::Approx(hyp_distance(q, p)).epsilon(1e-13));
    CHECK(hyp_distance(p, w) <= hyp_distance(p, q) + hyp_distance(q, w) + 1e-12);
  }
}

TEST_CASE("bolza: generators, relations, isometry") {
  const FuchsianGroup g = bolza_group();
  REQUIRE(g.generators.size() == 8);
  CHECK(g.relation_residual() < 1e-7);
  CHECK(g.vertex_relation_residual() < 1e-9);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& x = g.generators[k];
    CHECK(x.displacement == doctest::Approx(kSide).epsilon(1e-12));
    CHECK(hyp_distance(g.basepoint, x.apply(g.basepoint)) == doctest::Approx(kSide).epsilon(1e-12));
    CHECK(max_abs_diff(mat_mul(x.matrix, g.generators[k + 4].matrix), identity3()) < 1e-12);
    CHECK(lorentz_residual(x.matrix) < 1e-9);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.0, 2.0), ang(0.0, 2 * std::numbers::pi);
  const DeckTransform w = g.generators[0] * g.generators[5] * g.generators[2];
  CHECK(w.word == "aBc");
  CHECK((w * w.inverse()).is_identity());
  CHECK((w * w.inverse()).word.empty());
  for (int k = 0; k < 20; ++k) {
    const HPoint p = HPoint::polar(r(rng), ang(rng)), q = HPoint::polar(r(rng), ang(rng));
    CHECK(hyp_distance(w.apply(p), w.apply(q)) == doctest::Approx(hyp_distance(p, q)).epsilon(1e-9));
  }
}

TEST_CASE("enumerate_deck: small balls against a word-product oracle") {
  const FuchsianGroup g = bolza_group();
  CHECK(enumerate_deck(g, 1.0).size() == 1);
  CHECK(enumerate_deck(g, 0.0).front().is_identity());
  CHECK_THROWS_AS(enumerate_deck(g, 25.5), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_deck(g, -1.0), std::invalid_argument);

  // All words of length ≤ 2, deduplicated by matrix.
  std::vector<Mat3> words{identity3()};
  for (const auto& x : g.generators) {
    words.push_back(x.matrix);
    for (const auto& y : g.generators) words.push_back(mat_mul(x.matrix, y.matrix));
  }
  std::vector<Mat3> unique;
  for (const auto& m : words) {
    if (std::acosh(m[0][0]) > 3.1) continue;
    bool seen = false;
    for (const auto& u : unique) seen = seen || max_abs_diff(u, m) < 1e-6;
    if (!seen) unique.push_back(m);
  }
  const auto ball = enumerate_deck(g, 3.1);
  CHECK(ball.size() == unique.size());
  CHECK(ball.size() == 9);
  CHECK(minimum_displacement(ball) == doctest::Approx(kSide).epsilon(1e-12));
}

TEST_CASE("enumerate_deck: ordering, uniqueness, completeness") {
  const FuchsianGroup g = bolza_group();
  const auto ball = enumerate_deck(g, 6.0);
  for (std::size_t k = 1; k < ball.size(); ++k) CHECK(ball[k - 1].displacement <= ball[k].displacement + 1e-9);
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t j = i + 1; j < ball.size(); ++j) REQUIRE(max_abs_diff(ball[i].matrix, ball[j].matrix) > 1e-3);
  // Words reproduce their matrices.
  for (const auto& e : ball) {
    Mat3 m = identity3();
    for (char ch : e.word) {
      const std::size_t k = std::islower(ch) ? std::size_t(ch - 'a') : 4 + std::size_t(ch - 'A');
      m = mat_mul(m, g.generators[k].matrix);
    }
    CHECK(max_abs_diff(m, e.matrix) < 1e-6 * e.matrix[0][0]);
  }
  // A wider pruning margin finds nothing new.
  EnumerationOptions wide;
  wide.prune_margin = 2.0 * g.circumradius;
  CHECK(enumerate_deck(g, 6.0, wide).size() == ball.size());
  const auto cert = enumeration_closure(g, 6.0);
  CHECK(cert.stable);
  CHECK(cert.count == ball.size());
}

TEST_CASE("enumerate_deck: growth rate") {
  const FuchsianGroup g = bolza_group();
  std::vector<double> ts{4, 6, 8, 10}, logs;
  for (double t : ts) logs.push_back(std::log(double(enumerate_deck(g, t).size())));
  double mt = 0, ml = 0;
  for (std::size_t k = 0; k < 4; ++k) mt += ts[k] / 4, ml += logs[k] / 4;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < 4; ++k) sxy += (ts[k] - mt) * (logs[k] - ml), sxx += (ts[k] - mt) * (ts[k] - mt);
  const double slope = sxy / sxx;
  CHECK(slope >= 0.7);
  CHECK(slope <= 1.3);
  for (std::size_t k = 1; k < 4; ++k) CHECK(logs[k] > logs[k - 1]);
}

TEST_CASE("dirichlet domain membership") {
  const FuchsianGroup g = bolza_group();
  CHECK(dirichlet_contains(g, HPoint::origin(), kSide));
  const HPoint image = g.generators[1].apply(HPoint::origin());
  CHECK_FALSE(dirichlet_contains(g, image, 2 * kSide + kSide));
  for (int k = 0; k < 8; ++k)
    CHECK(dirichlet_contains(g, HPoint::polar(1.0, k * 0.7 + 0.1), 2.0 + kSide));
  // Midpoint of O and a·O lies on a side of the octagon.
  CHECK(dirichlet_classify(g, HPoint::polar(kSide / 2, 0.0), 2 * kSide) == DirichletMembership::Boundary);
  CHECK_THROWS_AS(dirichlet_contains(g, HPoint::polar(1.0, 0.0), 3.0), std::invalid_argument);
}

TEST_CASE("geodesics and axis translations") {
  const HGeodesic g = HGeodesic::through(HPoint::polar(0.7, 1.1), 0.4);
  CHECK(g.unit_speed_residual() < 1e-12);
  const HVec n = g.plane_normal();
  for (double t : {-2.0, 0.0, 1.5}) {
    CHECK(std::abs(minkowski(n, g(t).x)) < 1e-10);
    CHECK(hyp_distance(g(0.0), g(t)) == doctest::Approx(std::abs(t)).epsilon(1e-12));
  }
  const HPoint p = HPoint::polar(1.0, 0.3), q = HPoint::polar(2.0, -1.0);
  const HGeodesic pq = HGeodesic::between(p, q);
  CHECK(hyp_distance(pq(hyp_distance(p, q)), q) < 1e-9);

  const DeckTransform shift = axis_translation(g, 0.8);
  CHECK(lorentz_residual(shift.matrix) < 1e-12);
  CHECK(hyp_distance(shift.apply(g(0.2)), g(1.0)) < 1e-10);
  CHECK(shift.translation_length() == doctest::Approx(0.8).epsilon(1e-9));

  const auto h = common_perpendicular_length(perpendicular(-0.4, 0.0), perpendicular(0.5, 0.0));
  REQUIRE(h);
  CHECK(*h == doctest::Approx(0.9).epsilon(1e-12));
  CHECK_FALSE(common_perpendicular_length(x1_axis(), perpendicular(0.3, 0.0)));
  const auto x = geodesic_crossing(x1_axis(), perpendicular(0.3, 0.2));
  REQUIRE(x);
  CHECK((*x)[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK((*x)[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("stabilizer_test") {
  const FuchsianGroup g = bolza_group();
  const HGeodesic axis = x1_axis();
  CHECK(stabilizer_test(DeckTransform{}, axis, kSide).identity);
  CHECK_FALSE(stabilizer_test(DeckTransform{}, axis, kSide).shift);

  const auto a = stabilizer_test(g.generators[0], axis, kSide);
  REQUIRE(a.shift);
  CHECK(*a.shift == 1);
  CHECK(*stabilizer_test(g.generators[4] * g.generators[4], axis, kSide).shift == -2);

  const HGeodesic tilted = HGeodesic::through(HPoint::polar(0.4, 2.0), 0.9);
  const auto own = stabilizer_test(axis_translation(tilted, 1.3), tilted, 1.3);
  REQUIRE(own.shift);
  CHECK(*own.shift == 1);

  const DeckTransform w = g.generators[1] * g.generators[2] * g.generators[7];
  const auto none = stabilizer_test(w, axis, kSide);
  CHECK_FALSE(none.shift);
  CHECK(none.residual >= 0.1);
}

TEST_CASE("phase function: values and derivatives") {
  const FuchsianGroup g = bolza_group();
  const HGeodesic gam = HGeodesic::through(HPoint::polar(0.3, 0.5), 1.2);
  const PhaseFunction phi(gam, g.generators[1] * g.generators[2], gam);
  const double h = 1e-4;
  for (double t : {-0.4, 0.0, 0.35})
    for (double s : {-0.45, 0.1, 0.5}) {
      const Jet2 j = phi.jet(t, s);
      CHECK(std::abs(j.value - phi(t, s)) < 1e-10);
      CHECK(j.value == doctest::Approx(hyp_distance(gam(t), phi.alpha().apply(gam(s)))).epsilon(1e-10));
      CHECK(std::abs(j.dt - (phi(t + h, s) - phi(t - h, s)) / (2 * h)) < 1e-6);
      CHECK(std::abs(j.ds - (phi(t, s + h) - phi(t, s - h)) / (2 * h)) < 1e-6);
      const double fd_ts = (phi(t + h, s + h) - phi(t + h, s - h) - phi(t - h, s + h) + phi(t - h, s - h)) / (4 * h * h);
      CHECK(std::abs(j.dts - fd_ts) < 1e-5);
      const double fd_tt = (phi(t + h, s) - 2 * phi(t, s) + phi(t - h, s)) / (h * h);
      CHECK(std::abs(j.dtt - fd_tt) < 1e-4);
    }
}

TEST_CASE("critical points: common perpendicular inside the domain") {
  const PhaseFunction phi(perpendicular(-0.4, 0.1), DeckTransform{}, perpendicular(0.5, -0.2));
  const auto cps = find_critical_points(phi);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].t == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(cps[0].s == doctest::Approx(-0.2).epsilon(1e-9));
  CHECK(cps[0].grad_norm < 1e-10);
  CHECK(std::abs(cps[0].mixed) > 1e-6);
  // Hessian at the foot of a common perpendicular of length d has determinant 1.
  CHECK(phi.jet(cps[0].t, cps[0].s).hessian_det() == doctest::Approx(1.0).epsilon(1e-8));
  const GridMin m = grid_minimum(phi);
  CHECK(std::abs(cps[0].value - m.value) < 1e-6);
  CHECK(cps[0].value == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("critical points: perpendicular outside the domain, stabilizer phase") {
  const PhaseFunction outside(perpendicular(-0.4, 0.8), DeckTransform{}, perpendicular(0.5, -0.2));
  CHECK(find_critical_points(outside).empty());
  double min_grad = INFINITY;
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      const auto gr = outside.grad(-0.5 + a / 63.0, -0.5 + b / 63.0);
      min_grad = std::min(min_grad, std::hypot(gr[0], gr[1]));
    }
  CHECK(min_grad > 0.01);

  const FuchsianGroup g = bolza_group();
  const PhaseFunction stab(x1_axis(), g.generators[0], x1_axis());
  CHECK(find_critical_points(stab).empty());
  for (double t : {-0.5, 0.0, 0.3})
    for (double s : {-0.2, 0.4}) {
      const auto gr = stab.grad(t, s);
      CHECK(gr[0] == doctest::Approx(-gr[1]).epsilon(1e-9));
      CHECK(std::abs(gr[0]) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(stab(t, s) == doctest::Approx(std::abs(t - s - kSide)).epsilon(1e-10));
    }

  // Crossing geodesics are rejected.
  const PhaseFunction crossing(x1_axis(), DeckTransform{}, perpendicular(0.2, 0.1));
  CHECK(min_separation(crossing) == 0.0);
  CHECK_THROWS_AS(find_critical_points(crossing), std::invalid_argument);
}

TEST_CASE("critical points: random pairs and the stabilizer dichotomy") {
  const FuchsianGroup g = bolza_group();
  const auto ball = enumerate_deck(g, 8.0);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(1, ball.size() - 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int with_point = 0, trials = 0;
  while (trials < 30) {
    const DeckTransform& alpha = ball[pick(rng)];
    HGeodesic gam = HGeodesic::through(HPoint::polar(std::abs(u(rng)), 3 * u(rng)), 3 * u(rng));
    const auto axis = translation_axis(alpha);
    if (trials % 2 == 0 && axis) {
      // Nearly orthogonal to the axis of α, so a common perpendicular often
      // has its feet inside the domain.
      const double at = 0.3 * u(rng), tilt = 0.3 * u(rng);
      const HVec n = axis->plane_normal(), v = axis->velocity(at);
      gam.base = (*axis)(at).x;
      for (int i = 0; i < 3; ++i) gam.tangent[i] = std::cos(tilt) * n[i] + std::sin(tilt) * v[i];
    }
    const PhaseFunction phi(gam, alpha, gam);
    if (stabilizer_test(alpha, gam, std::max(alpha.translation_length(), 1e-3)).shift) continue;
    if (min_separation(phi) < 1e-2) continue;
    ++trials;
    const auto cps = find_critical_points(phi);
    CHECK(cps.size() <= 1);
    for (const auto& c : cps) {
      ++with_point;
      CHECK(std::abs(c.mixed) >= 1e-8);
      const auto len = common_perpendicular_length(gam, phi.image());
      REQUIRE(len);
      CHECK(std::abs(c.value - *len) < 1e-8);
    }
  }
  MESSAGE("random pairs with a critical point: " << with_point);

  const HGeodesic axis = x1_axis();
  int stabilizers = 0, points = 0;
  for (const auto& alpha : enumerate_deck(g, 7.0)) {
    if (alpha.is_identity()) continue;
    if (stabilizer_test(alpha, axis, kSide).shift) {
      ++stabilizers;
      continue;
    }
    const auto cps = find_critical_points(PhaseFunction(axis, alpha, axis));
    CHECK(cps.size() <= 1);
    for (const auto& c : cps) {
      CHECK(std::abs(c.mixed) > 1e-8);
      ++points;
    }
  }
  CHECK(stabilizers == 4);  // a, A, a², A²
  MESSAGE("axis phases with a critical point: " << points);
}

TEST_CASE("quadrilateral angle defect") {
  const double pi = std::numbers::pi;
  // Tiny square near O.
  const double d = 0.005;
  const double tiny = quadrilateral_angle_defect(HPoint::polar(d, 0), HPoint::polar(d, pi / 2),
                                                 HPoint::polar(d, pi), HPoint::polar(d, 3 * pi / 2));
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-3);

  const HPoint q1 = HPoint::polar(1, 0), q2 = HPoint::polar(1, pi / 2), q3 = HPoint::polar(1, pi),
               q4 = HPoint::polar(1, 3 * pi / 2);
  const double area = triangle_area(q1, q2, q3) + triangle_area(q1, q3, q4);
  CHECK(quadrilateral_angle_defect(q1, q2, q3, q4) == doctest::Approx(area).epsilon(1e-10));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.1, 2.5), jitter(-0.6, 0.6);
  int checked = 0;
  while (checked < 100) {
    std::array<HPoint, 4> v;
    for (int k = 0; k < 4; ++k) v[k] = HPoint::polar(r(rng), k * pi / 2 + jitter(rng));
    double defect = 0.0;
    try {
      defect = quadrilateral_angle_defect(v[0], v[1], v[2], v[3]);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ++checked;
    CHECK(defect > 0.0);
    const double split = triangle_area(v[0], v[1], v[2]) + triangle_area(v[0], v[2], v[3]);
    CHECK(defect == doctest::Approx(split).epsilon(1e-8));
  }

  CHECK_THROWS_AS(quadrilateral_angle_defect(q1, q3, q2, q4), std::invalid_argument);
  CHECK_THROWS_AS(quadrilateral_angle_defect(q1, q1, q3, q4), std::invalid_argument);
}
