#include "geoint/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "geoint/fit.hpp"
#include "geoint/quadrature.hpp"
#include "geoint/windows.hpp"

namespace geoint {

Amplitude Amplitude::product(Factor t, Factor s) {
  Amplitude a;
  a.terms_.push_back({1.0, std::move(t), std::move(s)});
  return a;
}

Amplitude Amplitude::field(Field f) {
  Amplitude a = product([](double) { return 1.0; }, [](double) { return 1.0; });
  a.field_ = std::move(f);
  return a;
}

Amplitude& Amplitude::add(double coeff, Factor t, Factor s) {
  terms_.push_back({coeff, std::move(t), std::move(s)});
  return *this;
}

Amplitude& Amplitude::multiply(Field f) {
  if (field_) {
    field_ = [g = field_, f = std::move(f)](double t, double s) { return g(t, s) * f(t, s); };
  } else {
    field_ = std::move(f);
  }
  return *this;
}

double Amplitude::operator()(double t, double s) const {
  double v = 0.0;
  for (const auto& term : terms_) v += term.coeff * term.t(t) * term.s(s);
  return field_ ? v * field_(t, s) : v;
}

double OscillatoryProblem::phase_at(double t, double s) const {
  return phase_value ? phase_value(t, s) : phase(t, s).value;
}

void OscillatoryProblem::validate() const {
  if (!phase) throw std::invalid_argument("OscillatoryProblem: missing phase");
  if (!(domain.t1 > domain.t0 && domain.s1 > domain.s0))
    throw std::invalid_argument("OscillatoryProblem: empty domain");
  for (int k = 0; k < 16; ++k) {
    const double u = (k + 0.5) / 16.0;
    const double t = domain.t0 + u * domain.width_t(), s = domain.s0 + u * domain.width_s();
    for (double v : {amplitude(t, domain.s0), amplitude(t, domain.s1), amplitude(domain.t0, s),
                     amplitude(domain.t1, s)})
      if (std::abs(v) >= 1e-10)
        throw std::invalid_argument("OscillatoryProblem: amplitude does not vanish on the boundary");
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kOrder = 16;
constexpr std::size_t kScanCells = 128;
constexpr std::size_t kMaxAxisNodes = 200000;

// Largest |∂φ| along each axis per coarse cell, maximised over the other axis.
struct GradientProfile {
  std::vector<double> t, s;
};

GradientProfile scan_gradient(const OscillatoryProblem& p) {
  const std::size_t n = kScanCells;
  std::vector<double> gt((n + 1) * (n + 1)), gs((n + 1) * (n + 1));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      const Jet2 jet = p.phase(p.domain.t0 + p.domain.width_t() * double(i) / n,
                               p.domain.s0 + p.domain.width_s() * double(j) / n);
      gt[i * (n + 1) + j] = std::abs(jet.dt);
      gs[i * (n + 1) + j] = std::abs(jet.ds);
    }
  GradientProfile prof{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      prof.t[i] = std::max({prof.t[i], gt[i * (n + 1) + j], gt[(i + 1) * (n + 1) + j]});
      prof.s[i] = std::max({prof.s[i], gs[j * (n + 1) + i], gs[j * (n + 1) + i + 1]});
    }
  return prof;
}

QuadratureRule axis_rule(double a, double b, const std::vector<double>& cells, double lambda,
                         const BruteForceOptions& o) {
  const double length = b - a;
  const double cell = length / double(cells.size());
  auto freq_on = [&](double x0, double x1) {
    const long lo = std::max(0L, long(std::floor((x0 - a) / cell)) - 1);
    const long hi = std::min(long(cells.size()) - 1, long(std::floor((x1 - a) / cell)) + 1);
    double f = 0.0;
    for (long k = lo; k <= hi; ++k) f = std::max(f, cells[std::size_t(k)]);
    return 1.1 * f;
  };
  const double cap = length / double(o.min_panels);
  const auto& gl = gauss_legendre(kOrder);
  QuadratureRule rule;
  double x = a;
  while (x < b) {
    double w = cap;
    for (int pass = 0; pass < 3; ++pass) {
      const double f = lambda * freq_on(x, std::min(b, x + w));
      const double limit = f > 0.0 ? double(kOrder) * 2.0 * std::numbers::pi / (o.nodes_per_wavelength * f) : cap;
      w = std::min(cap, limit);
    }
    if (x + w > b - 1e-12 * length) w = b - x;
    const double mid = x + 0.5 * w, half = 0.5 * w;
    for (std::size_t k = 0; k < kOrder; ++k) {
      rule.nodes.push_back(mid + half * gl.nodes[k]);
      rule.weights.push_back(half * gl.weights[k]);
    }
    if (rule.size() > kMaxAxisNodes) throw std::length_error("brute_force: node budget exceeded");
    x += w;
  }
  return rule;
}

}  // namespace

std::vector<OscillatoryValue> brute_force_batch(const OscillatoryProblem& problem,
                                                std::span<const Amplitude> amplitudes, double lambda,
                                                const BruteForceOptions& options) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("brute_force: λ must be at least 1");
  if (lambda > kMaxOscillatoryLambda) throw std::length_error("brute_force: λ above the node budget");
  const GradientProfile prof = scan_gradient(problem);
  const Rect& d = problem.domain;
  const QuadratureRule rt = axis_rule(d.t0, d.t1, prof.t, lambda, options);
  const QuadratureRule rs = axis_rule(d.s0, d.s1, prof.s, lambda, options);
  const std::size_t nt = rt.size(), ns = rs.size();

  struct Tables {
    std::vector<std::vector<double>> t, s;  // per term, premultiplied by coeff on t
  };
  std::vector<Tables> tabs(amplitudes.size());
  for (std::size_t a = 0; a < amplitudes.size(); ++a) {
    for (const auto& term : amplitudes[a].terms()) {
      std::vector<double> ft(nt), gs(ns);
      for (std::size_t i = 0; i < nt; ++i) ft[i] = term.coeff * term.t(rt.nodes[i]) * rt.weights[i];
      for (std::size_t j = 0; j < ns; ++j) gs[j] = term.s(rs.nodes[j]) * rs.weights[j];
      tabs[a].t.push_back(std::move(ft));
      tabs[a].s.push_back(std::move(gs));
    }
  }

  std::vector<OscillatoryValue> out(amplitudes.size());
  std::vector<double> re(amplitudes.size(), 0.0), im(amplitudes.size(), 0.0), mass(amplitudes.size(), 0.0);
  std::vector<double> c(nt), sn(nt);
  for (std::size_t j = 0; j < ns; ++j) {
    const double s = rs.nodes[j];
    for (std::size_t i = 0; i < nt; ++i) {
      const double arg = lambda * problem.phase_at(rt.nodes[i], s);
      c[i] = std::cos(arg);
      sn[i] = std::sin(arg);
    }
    for (std::size_t a = 0; a < amplitudes.size(); ++a) {
      Tables& tb = tabs[a];
      const auto& field = amplitudes[a].field_factor();
      if (field) {
        for (std::size_t i = 0; i < nt; ++i) {
          double v = 0.0;
          for (std::size_t k = 0; k < tb.t.size(); ++k) v += tb.t[k][i] * tb.s[k][j];
          if (v == 0.0) continue;
          v *= field(rt.nodes[i], s);
          re[a] += v * c[i];
          im[a] += v * sn[i];
          mass[a] += std::abs(v);
        }
        continue;
      }
      for (std::size_t k = 0; k < tb.t.size(); ++k) {
        const double g = tb.s[k][j];
        if (g == 0.0) continue;
        const double* f = tb.t[k].data();
        double sr = 0.0, si = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
          sr += f[i] * c[i];
          si += f[i] * sn[i];
        }
        re[a] += g * sr;
        im[a] += g * si;
      }
      if (tb.t.size() > 1) {
        for (std::size_t i = 0; i < nt; ++i) {
          double v = 0.0;
          for (std::size_t k = 0; k < tb.t.size(); ++k) v += tb.t[k][i] * tb.s[k][j];
          mass[a] += std::abs(v);
        }
      }
    }
  }
  for (std::size_t a = 0; a < amplitudes.size(); ++a) {
    const Tables& tb = tabs[a];
    if (!amplitudes[a].has_field() && tb.t.size() == 1) {
      double mt = 0.0, ms = 0.0;
      for (double v : tb.t[0]) mt += std::abs(v);
      for (double v : tb.s[0]) ms += std::abs(v);
      mass[a] = mt * ms;
    }
    out[a] = {{re[a], im[a]}, mass[a], nt, ns};
  }
  return out;
}

OscillatoryValue brute_force(const OscillatoryProblem& problem, double lambda, const BruteForceOptions& options) {
  return brute_force_batch(problem, std::span<const Amplitude>(&problem.amplitude, 1), lambda, options).front();
}

std::complex<double> brute_force_integral(const OscillatoryProblem& problem, double lambda) {
  return brute_force(problem, lambda).value;
}

double self_convergence(const OscillatoryProblem& problem, double lambda) {
  const BruteForceOptions base;
  BruteForceOptions fine;
  fine.nodes_per_wavelength = 2.0 * base.nodes_per_wavelength;
  fine.min_panels = 2 * base.min_panels;
  const OscillatoryValue a = brute_force(problem, lambda, base);
  const OscillatoryValue b = brute_force(problem, lambda, fine);
  return a.l1_mass > 0.0 ? std::abs(b.value - a.value) / a.l1_mass : std::abs(b.value - a.value);
}

// ---------------------------------------------------------------------------

const char* phase_class_name(PhaseClass c) {
  switch (c) {
    case PhaseClass::NoCritical: return "no-critical";
    case PhaseClass::FullHessianNondegenerate: return "full-hessian";
    case PhaseClass::MixedOnly: return "mixed-only";
  }
  return "unknown";
}

PhaseClassification classify_phase(const OscillatoryProblem& problem) {
  const auto points = stationary_points(problem.phase, problem.domain);
  if (points.size() >= 2)
    throw std::domain_error("classify_phase: two or more critical points on the domain");
  PhaseClassification c;
  if (points.empty()) return c;
  c.t0 = points[0].t;
  c.s0 = points[0].s;
  c.jet = points[0].jet;
  if (std::abs(c.jet.hessian_det()) > kDegenerateHessian) {
    c.kind = PhaseClass::FullHessianNondegenerate;
  } else if (std::abs(c.jet.dts) > kDegenerateHessian) {
    c.kind = PhaseClass::MixedOnly;
  } else {
    throw std::domain_error("classify_phase: degenerate critical point with vanishing mixed derivative");
  }
  return c;
}

// ---------------------------------------------------------------------------

DecayFit fit_decay(std::span<const double> lambdas, std::span<const double> magnitudes) {
  DecayFit fit;
  fit.lambdas.assign(lambdas.begin(), lambdas.end());
  fit.magnitudes.assign(magnitudes.begin(), magnitudes.end());
  std::vector<double> x, y;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    if (magnitudes[k] > kDecayFloor) {
      x.push_back(lambdas[k]);
      y.push_back(magnitudes[k]);
    }
  fit.used = x.size();
  if (x.size() < 2) return fit;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  fit.span = *hi / *lo;
  const LineFit line = fit_log_log(x, y);
  fit.p = -line.slope;
  fit.C = std::exp(line.intercept);
  fit.residual = line.max_abs_residual;
  fit.valid = fit.used >= 5 && fit.span >= 8.0;
  return fit;
}

namespace {

void check_grid(std::span<const double> lambdas) {
  if (lambdas.size() < 5) throw std::invalid_argument("decay_fit: need at least 5 λ values");
  for (double l : lambdas)
    if (l < 20.0 || l > kMaxOscillatoryLambda) throw std::invalid_argument("decay_fit: λ outside [20, 2000]");
}

}  // namespace

DecayFit decay_fit(const OscillatoryProblem& problem, std::span<const double> lambdas) {
  check_grid(lambdas);
  std::vector<double> mags;
  for (double l : lambdas) mags.push_back(std::abs(brute_force(problem, l).value));
  return fit_decay(lambdas, mags);
}

EpsilonSplitTable epsilon_split_check(const OscillatoryProblem& problem, std::span<const double> epsilons,
                                      std::span<const double> lambdas) {
  const PhaseClassification cls = classify_phase(problem);
  if (cls.kind != PhaseClass::MixedOnly)
    throw std::invalid_argument("epsilon_split_check: phase is not in the mixed-only case");
  if (epsilons.empty()) throw std::invalid_argument("epsilon_split_check: empty ε list");
  check_grid(lambdas);
  double eps_min = INFINITY;
  for (double e : epsilons) eps_min = std::min(eps_min, e);
  if (!(eps_min >= 0.01)) throw std::invalid_argument("epsilon_split_check: ε below 0.01 exceeds the node budget");

  // Batch: the full amplitude, then (inner, outer) for each ε. Both parts
  // stay sums of products, so the cutoff never forces pointwise evaluation.
  const CutoffBeta beta = make_beta();
  std::vector<Amplitude> amps{problem.amplitude};
  for (double eps : epsilons) {
    auto bt = [beta, eps, t0 = cls.t0](double t) { return beta((t - t0) / eps); };
    auto bs = [beta, eps, s0 = cls.s0](double s) { return beta((s - s0) / eps); };
    Amplitude inner, outer;
    for (const auto& term : problem.amplitude.terms()) {
      auto ft = [f = term.t, bt](double t) { return f(t) * bt(t); };
      auto fs = [f = term.s, bs](double s) { return f(s) * bs(s); };
      inner.add(term.coeff, ft, fs);
      outer.add(term.coeff, term.t, term.s);
      outer.add(-term.coeff, ft, fs);
    }
    if (problem.amplitude.has_field()) {
      inner.multiply(problem.amplitude.field_factor());
      outer.multiply(problem.amplitude.field_factor());
    }
    amps.push_back(std::move(inner));
    amps.push_back(std::move(outer));
  }
  BruteForceOptions options;
  const double width = std::max(problem.domain.width_t(), problem.domain.width_s());
  options.min_panels = std::max<std::size_t>(options.min_panels, std::size_t(std::ceil(2.0 * width / eps_min)));

  EpsilonSplitTable table;
  table.epsilons.assign(epsilons.begin(), epsilons.end());
  std::vector<std::vector<double>> outer_mag(epsilons.size());
  table.inner_scaled_sup.assign(epsilons.size(), 0.0);
  for (double lambda : lambdas) {
    const auto values = brute_force_batch(problem, amps, lambda, options);
    const double full = std::abs(values[0].value);
    table.full_scaled_sup = std::max(table.full_scaled_sup, std::sqrt(lambda) * full);
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      EpsilonRow row{epsilons[e], lambda, full, std::abs(values[1 + 2 * e].value),
                     std::abs(values[2 + 2 * e].value)};
      table.inner_scaled_sup[e] = std::max(table.inner_scaled_sup[e], std::sqrt(lambda) * row.inner);
      outer_mag[e].push_back(row.outer);
      table.rows.push_back(row);
    }
  }
  double num = 0.0, den = 0.0;
  table.outer_decay_ok = true;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    table.outer_fits.push_back(fit_decay(lambdas, outer_mag[e]));
    const DecayFit& f = table.outer_fits.back();
    // An outer part that is zero or below the floor everywhere has no rate to fit.
    const bool vanished = f.used == 0;
    if (!vanished && !(f.used >= 2 && f.p >= 0.9)) table.outer_decay_ok = false;
    num += epsilons[e] * table.inner_scaled_sup[e];
    den += epsilons[e] * epsilons[e];
  }
  table.slope_A = num / den;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double model = table.slope_A * epsilons[e];
    table.max_relative_deviation =
        std::max(table.max_relative_deviation, std::abs(table.inner_scaled_sup[e] - model) / model);
  }
  table.linear_trend_ok = table.max_relative_deviation <= 0.5;
  return table;
}

// ---------------------------------------------------------------------------

OscillatoryProblem negative_curvature_problem(const HGeodesic& gamma, const DeckTransform& alpha,
                                              const TestWindowB& b_t, const TestWindowB& b_s,
                                              const KernelAmplitudeModel& model, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("negative_curvature_problem: sign must be ±1");
  auto phi = std::make_shared<PhaseFunction>(gamma, alpha, gamma);
  const double sg = sign;
  OscillatoryProblem p;
  p.phase = [phi, sg](double t, double s) {
    Jet2 j = phi->jet(t, s);
    j.value *= sg, j.dt *= sg, j.ds *= sg, j.dtt *= sg, j.dts *= sg, j.dss *= sg;
    return j;
  };
  p.phase_value = [phi, sg](double t, double s) { return sg * phi->jet(t, s).value; };
  p.amplitude = Amplitude::product([b_t](double t) { return b_t(t); }, [b_s](double s) { return b_s(s); });
  p.amplitude.multiply([phi, model](double t, double s) { return model.profile(phi->jet(t, s).value); });
  p.domain = {-0.5, 0.5, -0.5, 0.5};
  return p;
}

NegativeCurvatureValue negative_curvature_integral(const HGeodesic& gamma, const DeckTransform& alpha,
                                                   const TestWindowB& b_t, const TestWindowB& b_s,
                                                   const KernelAmplitudeModel& model, double lambda, int sign) {
  if (alpha.is_identity()) throw std::invalid_argument("negative_curvature_integral: α must be nontrivial");
  if (min_separation(PhaseFunction(gamma, alpha, gamma)) < 1e-2)
    throw std::invalid_argument("negative_curvature_integral: geodesics closer than 1e-2 on the domain");
  const OscillatoryProblem p = negative_curvature_problem(gamma, alpha, b_t, b_s, model, sign);
  NegativeCurvatureValue out;
  out.phase = classify_phase(p);
  out.value = brute_force_integral(p, lambda);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

OscillatoryProblem bump_problem(double radius, JetFunction jet, std::function<double(double, double)> value) {
  OscillatoryProblem p;
  p.phase = std::move(jet);
  p.phase_value = std::move(value);
  auto bump = [radius](double x) { return unit_bump(x, radius); };
  p.amplitude = Amplitude::product(bump, bump);
  p.domain = {-radius, radius, -radius, radius};
  return p;
}

}  // namespace

OscillatoryProblem canonical_no_critical(double radius) {
  return bump_problem(
      radius, [](double t, double s) { return Jet2{t + s, 1.0, 1.0, 0.0, 0.0, 0.0}; },
      [](double t, double s) { return t + s; });
}

OscillatoryProblem canonical_full_hessian(double radius) {
  return bump_problem(
      radius, [](double t, double s) { return Jet2{t * t - s * s, 2 * t, -2 * s, 2.0, 0.0, -2.0}; },
      [](double t, double s) { return t * t - s * s; });
}

OscillatoryProblem canonical_mixed_only(double radius) {
  return bump_problem(
      radius,
      [](double t, double s) {
        const double u = t + s;
        return Jet2{u * u + s * s * s * s, 2 * u, 2 * u + 4 * s * s * s, 2.0, 2.0, 2.0 + 12 * s * s};
      },
      [](double t, double s) {
        const double u = t + s, s2 = s * s;
        return u * u + s2 * s2;
      });
}

}  // namespace geoint
