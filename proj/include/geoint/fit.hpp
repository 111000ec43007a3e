#pragma once

#include <span>
#include <vector>

namespace geoint {

/// Ordinary least-squares fit y ≈ intercept + slope·x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
  double max_abs_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit of log|y| against log x. Entries with |y| <= floor are skipped.
LineFit fit_log_log(std::span<const double> x, std::span<const double> y,
                    double floor = 0.0);

}  // namespace geoint
