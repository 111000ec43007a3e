#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "geoint/critical_points.hpp"
#include "geoint/hyperbolic.hpp"
#include "geoint/period_integrals.hpp"
#include "geoint/projector_kernels.hpp"

namespace geoint {

/// a(t,s) = (Σ_k c_k f_k(t) g_k(s)) · m(t,s), with m ≡ 1 unless a field is
/// attached. Sums of products are integrated from per-axis tables.
class Amplitude {
 public:
  using Factor = std::function<double(double)>;
  using Field = std::function<double(double, double)>;

  struct Term {
    double coeff = 1.0;
    Factor t;
    Factor s;
  };

  static Amplitude product(Factor t, Factor s);
  /// Non-separable amplitude; evaluated point by point.
  static Amplitude field(Field f);

  Amplitude& add(double coeff, Factor t, Factor s);
  Amplitude& multiply(Field f);

  double operator()(double t, double s) const;
  bool has_field() const { return static_cast<bool>(field_); }
  const std::vector<Term>& terms() const { return terms_; }
  const Field& field_factor() const { return field_; }

 private:
  std::vector<Term> terms_;
  Field field_;
};

/// I(λ) = ∬_domain e^{iλφ(t,s)} a(t,s) dt ds.
struct OscillatoryProblem {
  JetFunction phase;                                 // value and derivatives
  std::function<double(double, double)> phase_value; // optional fast path
  Amplitude amplitude;
  Rect domain;

  double phase_at(double t, double s) const;
  /// Throws unless the amplitude vanishes (< 1e-10) at 64 boundary samples.
  void validate() const;
};

struct BruteForceOptions {
  double nodes_per_wavelength = 10.0;
  std::size_t min_panels = 16;  // 16-point panels per axis
};

struct OscillatoryValue {
  std::complex<double> value;
  double l1_mass = 0.0;  // ∬|a| on the same grid
  std::size_t nodes_t = 0;
  std::size_t nodes_s = 0;
};

inline constexpr double kMaxOscillatoryLambda = 2000.0;

/// Tensor Gauss-Legendre with panel widths set by the local phase gradient,
/// so each axis gets at least `nodes_per_wavelength` nodes per local period.
/// All amplitudes share the node grid and the phase evaluations.
std::vector<OscillatoryValue> brute_force_batch(const OscillatoryProblem& problem,
                                                std::span<const Amplitude> amplitudes, double lambda,
                                                const BruteForceOptions& options = {});

OscillatoryValue brute_force(const OscillatoryProblem& problem, double lambda,
                             const BruteForceOptions& options = {});

std::complex<double> brute_force_integral(const OscillatoryProblem& problem, double lambda);

/// |I(2×nodes) − I| / ∬|a|.
double self_convergence(const OscillatoryProblem& problem, double lambda);

enum class PhaseClass { NoCritical, FullHessianNondegenerate, MixedOnly };

const char* phase_class_name(PhaseClass c);

struct PhaseClassification {
  PhaseClass kind = PhaseClass::NoCritical;
  double t0 = 0.0, s0 = 0.0;  // the critical point, when there is one
  Jet2 jet;
};

inline constexpr double kDegenerateHessian = 1e-8;

/// Critical points of the phase on the problem domain, classified by the
/// Hessian determinant and the mixed entry. Throws for two or more critical
/// points, or a degenerate one with vanishing mixed entry.
PhaseClassification classify_phase(const OscillatoryProblem& problem);

inline constexpr double kDecayFloor = 1e-14;

/// |I(λ)| ≈ C λ^{-p}.
struct DecayFit {
  double p = 0.0;
  double C = 0.0;
  double residual = 0.0;  // max |log|I| − fit| over the used points
  std::vector<double> lambdas;
  std::vector<double> magnitudes;
  std::size_t used = 0;   // points above the floor
  double span = 0.0;      // max/min of the used λ
  bool valid = false;     // used ≥ 5 and span ≥ 8
};

DecayFit fit_decay(std::span<const double> lambdas, std::span<const double> magnitudes);

/// Requires ≥ 5 grid points inside [20, 2000].
DecayFit decay_fit(const OscillatoryProblem& problem, std::span<const double> lambdas);

struct EpsilonRow {
  double epsilon = 0.0;
  double lambda = 0.0;
  double full = 0.0;   // |I|
  double inner = 0.0;  // |I − I₁|, the part cut off near the critical point
  double outer = 0.0;  // |I₁|
};

struct EpsilonSplitTable {
  std::vector<EpsilonRow> rows;
  std::vector<double> epsilons;
  std::vector<DecayFit> outer_fits;      // per ε
  std::vector<double> inner_scaled_sup;  // sup_λ λ^{1/2}|I − I₁| per ε
  double full_scaled_sup = 0.0;          // sup_λ λ^{1/2}|I|
  double slope_A = 0.0;                  // least-squares A in sup ≈ A·ε
  double max_relative_deviation = 0.0;   // max |sup − Aε| / (Aε)
  bool outer_decay_ok = false;           // every outer fit has p ≥ 0.9
  bool linear_trend_ok = false;          // deviation ≤ 0.5
};

/// Splits I = (I − I₁) + I₁ with the cutoff β((t−t₀)/ε)β((s−s₀)/ε) around the
/// critical point. The problem must classify as MixedOnly and ε ≥ 0.01.
EpsilonSplitTable epsilon_split_check(const OscillatoryProblem& problem,
                                      std::span<const double> epsilons,
                                      std::span<const double> lambdas);

/// The model integral ∬ b₁(t)b₂(s) a(φ) e^{±iλφ} with φ(t,s) = d(γ(t), α(γ(s)))
/// and a the kernel amplitude profile; w ≡ 1.
OscillatoryProblem negative_curvature_problem(const HGeodesic& gamma, const DeckTransform& alpha,
                                              const TestWindowB& b_t, const TestWindowB& b_s,
                                              const KernelAmplitudeModel& model, int sign = 1);

struct NegativeCurvatureValue {
  std::complex<double> value;
  PhaseClassification phase;
};

/// Requires α nontrivial and the geodesics at least 1e-2 apart on the domain.
NegativeCurvatureValue negative_curvature_integral(const HGeodesic& gamma, const DeckTransform& alpha,
                                                   const TestWindowB& b_t, const TestWindowB& b_s,
                                                   const KernelAmplitudeModel& model, double lambda,
                                                   int sign = 1);

/// Canonical problems with unit-height bump amplitudes centred at the origin.
OscillatoryProblem canonical_no_critical(double radius = 0.5);        // φ = t + s
OscillatoryProblem canonical_full_hessian(double radius = 1.0);       // φ = t² − s²
OscillatoryProblem canonical_mixed_only(double radius = 1.3);         // φ = (t+s)² + s⁴

}  // namespace geoint
