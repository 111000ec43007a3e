#include "geoint/critical_points.hpp"

#include <algorithm>
#include <cmath>

namespace geoint {

double Jet2::grad_norm() const { return std::hypot(dt, ds); }

bool Rect::contains(double t, double s, double slack) const {
  return t >= t0 - slack && t <= t1 + slack && s >= s0 - slack && s <= s1 + slack;
}

namespace {

struct Step {
  double dt = 0.0, ds = 0.0;
};

Step newton_step(const Jet2& j) {
  const double det = j.hessian_det();
  if (det == 0.0 || !std::isfinite(det)) return {NAN, NAN};
  return {(-j.dss * j.dt + j.dts * j.ds) / det, (j.dts * j.dt - j.dtt * j.ds) / det};
}

// (HᵀH + μI) δ = −Hᵀg with H symmetric.
Step damped_step(const Jet2& j, double mu) {
  const double a = j.dtt * j.dtt + j.dts * j.dts + mu;
  const double b = j.dtt * j.dts + j.dts * j.dss;
  const double c = j.dts * j.dts + j.dss * j.dss + mu;
  const double rt = -(j.dtt * j.dt + j.dts * j.ds);
  const double rs = -(j.dts * j.dt + j.dss * j.ds);
  const double det = a * c - b * b;
  return {(c * rt - b * rs) / det, (a * rs - b * rt) / det};
}

}  // namespace

std::vector<StationaryPoint> stationary_points(const JetFunction& f, const Rect& box,
                                               const NewtonOptions& options) {
  std::vector<StationaryPoint> found;
  const int n = options.seeds_per_axis;
  const double escape = 0.5 * std::max(box.width_t(), box.width_s());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double t = box.t0 + (a + 0.5) * box.width_t() / n;
      double s = box.s0 + (b + 0.5) * box.width_s() / n;
      Jet2 j = f(t, s);
      bool lost = false;
      for (int it = 0; it < options.max_iterations; ++it) {
        const double g = j.grad_norm();
        if (g == 0.0) break;
        Step step = newton_step(j);
        Jet2 next;
        bool accepted = false;
        if (std::isfinite(step.dt) && std::isfinite(step.ds)) {
          next = f(t + step.dt, s + step.ds);
          accepted = std::isfinite(next.value) && next.grad_norm() <= g;
        }
        if (!accepted) {
          const double scale = j.dtt * j.dtt + 2.0 * j.dts * j.dts + j.dss * j.dss;
          double mu = std::max(1e-12 * scale, 1e-300);
          for (int k = 0; k < 40 && !accepted; ++k, mu *= 10.0) {
            step = damped_step(j, mu);
            if (!std::isfinite(step.dt) || !std::isfinite(step.ds)) continue;
            next = f(t + step.dt, s + step.ds);
            accepted = std::isfinite(next.value) && next.grad_norm() < g;
          }
        }
        if (!accepted) break;
        t += step.dt;
        s += step.ds;
        j = next;
        if (!box.contains(t, s, escape)) {
          lost = true;
          break;
        }
        if (std::hypot(step.dt, step.ds) < 1e-14 && j.grad_norm() < options.tolerance) break;
      }
      if (lost || !(j.grad_norm() < options.accept) || !box.contains(t, s, 1e-12)) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const StationaryPoint& p) {
        return std::hypot(p.t - t, p.s - s) < options.dedup;
      });
      if (!duplicate) found.push_back({t, s, j});
    }
  }
  std::sort(found.begin(), found.end(), [](const StationaryPoint& x, const StationaryPoint& y) {
    return x.t != y.t ? x.t < y.t : x.s < y.s;
  });
  return found;
}

}  // namespace geoint
