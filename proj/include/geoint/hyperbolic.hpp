#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoint/critical_points.hpp"

namespace geoint {

/// Vectors in ℝ^{2,1} with the pairing ⟨a,b⟩ = a₀b₀ − a₁b₁ − a₂b₂.
using HVec = std::array<double, 3>;
using Mat3 = std::array<HVec, 3>;

double minkowski(const HVec& a, const HVec& b);
Mat3 mat_mul(const Mat3& a, const Mat3& b);
HVec mat_apply(const Mat3& m, const HVec& v);
Mat3 identity3();
/// Inverse of a Lorentz matrix, J Mᵀ J.
Mat3 lorentz_inverse(const Mat3& m);
double max_abs_diff(const Mat3& a, const Mat3& b);
/// ‖MᵀJM − J‖ (entrywise max).
double lorentz_residual(const Mat3& m);

/// Elliptic rotation about O = (1,0,0) and the translation along the x₁-axis.
Mat3 rotation_about_origin(double angle);
Mat3 translation_along_x1(double length);

/// Point of the upper sheet x₀² − x₁² − x₂² = 1.
struct HPoint {
  HVec x{1.0, 0.0, 0.0};

  static HPoint origin() { return {}; }
  /// Lifts (x₁, x₂) to the sheet.
  static HPoint from_spatial(double x1, double x2);
  /// Projects an arbitrary timelike vector back to the sheet.
  static HPoint normalized(const HVec& v);
  /// Point at distance r from O in direction `angle`.
  static HPoint polar(double r, double angle);
  /// Poincaré disc coordinates (|z| < 1).
  static HPoint from_disc(double u, double v);
  std::array<double, 2> to_disc() const;
  /// Beltrami-Klein coordinates; geodesics are straight chords.
  std::array<double, 2> to_klein() const;

  double constraint_residual() const;
};

double hyp_distance(const HPoint& p, const HPoint& q);

/// Isometry of the hyperbolic plane, with the generator word that produced it.
struct DeckTransform {
  Mat3 matrix = identity3();
  std::string word;           // empty for the identity
  double displacement = 0.0;  // d(O, α·O)

  static DeckTransform from_matrix(const Mat3& m, std::string word);

  HPoint apply(const HPoint& p) const;
  HVec apply(const HVec& v) const;
  DeckTransform inverse() const;
  /// (this ∘ other), words concatenated with free cancellation.
  DeckTransform operator*(const DeckTransform& other) const;
  /// Minimal displacement, arccosh((trace − 1)/2); 0 for elliptic or identity.
  double translation_length() const;
  bool is_identity(double tol = 1e-9) const;
};

/// Inverse of a word over a,b,c,d with capitals as inverses.
std::string inverse_word(const std::string& word);

struct FuchsianGroup {
  std::vector<DeckTransform> generators;  // a b c d, then A B C D
  HPoint basepoint;
  double side_pairing_length = 0.0;       // 2·arccosh(1+√2)
  double circumradius = 0.0;              // O to an octagon vertex

  /// ‖[a,B][Bac, DAb] − I‖ in extended precision.
  double relation_residual() const;
  /// ‖aBcDAbCd − I‖, the vertex-cycle relation.
  double vertex_relation_residual() const;
};

/// The genus-2 group of the regular octagon with angles π/4, opposite sides
/// paired by translations of length 2·arccosh(1+√2) through O.
FuchsianGroup bolza_group();

struct EnumerationOptions {
  /// Breadth-first search discards elements with displacement above
  /// T + prune_margin; defaults to the circumradius.
  std::optional<double> prune_margin;
  std::size_t max_word_length = std::numeric_limits<std::size_t>::max();
};

/// Every group element with displacement ≤ T, once each, sorted by displacement.
std::vector<DeckTransform> enumerate_deck(const FuchsianGroup& group, double T,
                                          const EnumerationOptions& options = {});

struct ClosureCertificate {
  std::size_t word_length = 0;  // longest shortest-word in the ball
  std::size_t count = 0;
  bool stable = false;          // same set with word length L and L+2
};

ClosureCertificate enumeration_closure(const FuchsianGroup& group, double T);

/// Smallest displacement among nontrivial elements; +inf if there are none.
double minimum_displacement(std::span<const DeckTransform> elements);

enum class DirichletMembership { Inside, Boundary, Outside };

/// Compares d(O,p) against d(O,αp) over the ball of radius T_check, which
/// must be at least 2·d(O,p) + the side pairing length.
DirichletMembership dirichlet_classify(const FuchsianGroup& group, const HPoint& p,
                                       double T_check);
bool dirichlet_contains(const FuchsianGroup& group, const HPoint& p, double T_check);

/// Unit-speed geodesic t ↦ cosh(t)·base + sinh(t)·tangent.
struct HGeodesic {
  HVec base{1.0, 0.0, 0.0};
  HVec tangent{0.0, 1.0, 0.0};

  /// Through p with initial direction `angle`, measured in the frame carried
  /// from O by the pure translation O ↦ p.
  static HGeodesic through(const HPoint& p, double angle);
  /// Unit speed from p towards q.
  static HGeodesic between(const HPoint& p, const HPoint& q);

  HPoint operator()(double t) const;
  HVec velocity(double t) const;
  HGeodesic transformed(const DeckTransform& alpha) const;
  /// Spacelike normal of the plane through 0 containing the geodesic.
  HVec plane_normal() const;

  double unit_speed_residual() const;
};

/// Length of the common perpendicular of two ultraparallel geodesics;
/// nullopt if they meet or are asymptotic.
std::optional<double> common_perpendicular_length(const HGeodesic& g1, const HGeodesic& g2);

/// Parameters (t on g1, s on g2) where the geodesics cross, if they do.
std::optional<std::array<double, 2>> geodesic_crossing(const HGeodesic& g1, const HGeodesic& g2);

/// Axis of a hyperbolic element, parametrized so that α(axis(t)) = axis(t + ℓ);
/// nullopt for the identity and non-hyperbolic elements.
std::optional<HGeodesic> translation_axis(const DeckTransform& alpha);

/// Translation by `length` along the geodesic's own axis.
DeckTransform axis_translation(const HGeodesic& axis, double length);

struct StabilizerResult {
  bool identity = false;
  std::optional<int> shift;  // k with α(γ(s)) = γ(s + kℓ), 0 < |k| ≤ 5
  double residual = 0.0;     // best max-distance residual over k
};

StabilizerResult stabilizer_test(const DeckTransform& alpha, const HGeodesic& geodesic, double period);

/// φ(t,s) = d(γ₁(t), α(γ₂(s))).
class PhaseFunction {
 public:
  PhaseFunction(HGeodesic first, DeckTransform alpha, HGeodesic second);

  double operator()(double t, double s) const;
  std::array<double, 2> grad(double t, double s) const;
  double mixed(double t, double s) const { return jet(t, s).dts; }
  /// Value, gradient and Hessian from derivatives of the Minkowski pairing.
  Jet2 jet(double t, double s) const;

  const HGeodesic& first() const { return first_; }
  const HGeodesic& second() const { return second_; }
  const HGeodesic& image() const { return image_; }
  const DeckTransform& alpha() const { return alpha_; }

 private:
  HGeodesic first_;
  DeckTransform alpha_;
  HGeodesic second_;
  HGeodesic image_;  // α applied to the second geodesic
};

/// Smallest value of φ over the box: 0 if the geodesics cross inside it,
/// otherwise a 65×65 grid minimum.
double min_separation(const PhaseFunction& phase, const Rect& box = {});

struct CriticalPoint {
  double t = 0.0, s = 0.0;
  double value = 0.0;
  double mixed = 0.0;
  double grad_norm = 0.0;
};

/// Joint zeros of ∂_tφ and ∂_sφ in the box. Requires separation ≥ 1e-3.
std::vector<CriticalPoint> find_critical_points(const PhaseFunction& phase, const Rect& box = {},
                                                const NewtonOptions& options = {});

/// 2π minus the interior angles of the geodesic quadrilateral p₁p₂p₃p₄.
/// Vertices must be in convex position with pairwise distances ≥ 1e-3.
double quadrilateral_angle_defect(const HPoint& p1, const HPoint& p2, const HPoint& p3,
                                  const HPoint& p4);

}  // namespace geoint
