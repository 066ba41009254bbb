#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace nlkl {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;        ///< sum of panel |K15 - G7| estimates
  std::size_t panels = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. The
/// interval is first split at every breakpoint inside (a, b); afterwards the
/// panel with the largest error estimate is bisected until the total estimate
/// is <= tol. Throws QuadratureNoConvergence when max_panels is reached first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol, std::span<const double> breakpoints = {},
                                    std::size_t max_panels = 20000);

}  // namespace nlkl
