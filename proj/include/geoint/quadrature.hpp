#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace geoint {

/// Nodes and weights of a quadrature rule on a fixed interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Gauss-Legendre rule of order n on [-1, 1]. Rules are computed once and
/// cached; the returned reference stays valid for the life of the process.
const QuadratureRule& gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of the
/// given order.
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                        std::size_t order = 16);

/// Composite rule over consecutive breakpoints; each sub-interval gets enough
/// equal panels that the panel width is at most `max_panel_width`.
QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints,
                                        double max_panel_width,
                                        std::size_t order = 16);

/// Number of order-`order` panels needed on an interval of `length` so that
/// a signal of angular frequency `frequency` gets at least
/// `nodes_per_wavelength` nodes per period. Never less than `min_panels`.
std::size_t panels_for_frequency(double length, double frequency,
                                 double nodes_per_wavelength,
                                 std::size_t order = 16,
                                 std::size_t min_panels = 1);

}  // namespace geoint
