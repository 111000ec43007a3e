#pragma once

#include <functional>
#include <vector>

namespace geoint {

/// Value, gradient and Hessian of a function of (t, s).
struct Jet2 {
  double value = 0.0;
  double dt = 0.0, ds = 0.0;
  double dtt = 0.0, dts = 0.0, dss = 0.0;

  double grad_norm() const;
  double hessian_det() const { return dtt * dss - dts * dts; }
};

using JetFunction = std::function<Jet2(double, double)>;

struct Rect {
  double t0 = -0.5, t1 = 0.5;
  double s0 = -0.5, s1 = 0.5;

  double width_t() const { return t1 - t0; }
  double width_s() const { return s1 - s0; }
  bool contains(double t, double s, double slack = 0.0) const;
};

struct NewtonOptions {
  int seeds_per_axis = 16;
  int max_iterations = 50;
  double tolerance = 1e-12;  // target |grad|
  double accept = 1e-10;     // largest |grad| reported as a critical point
  double dedup = 1e-6;
};

struct StationaryPoint {
  double t = 0.0, s = 0.0;
  Jet2 jet;
};

/// Zeros of the gradient inside `box`: Newton from a grid of seeds, with a
/// Levenberg-Marquardt step on |grad|² when the Newton step does not reduce
/// the gradient. Seeds that fail to converge or leave the box are dropped.
std::vector<StationaryPoint> stationary_points(const JetFunction& f, const Rect& box,
                                               const NewtonOptions& options = {});

}  // namespace geoint
