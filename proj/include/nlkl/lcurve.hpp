#pragma once

// Lambda selection at the corner of the L-curve (log E, log R).

#include <cstddef>
#include <utility>
#include <vector>

#include "nlkl/solve.hpp"

namespace nlkl {

/// lambda_min = max(smallest positive eigenvalue, rtol lambda_max),
/// lambda_max = largest eigenvalue. Throws NoPositiveSpectrum.
std::pair<double, double> lambda_range(const GenEig& e, double rtol = kRankTolerance);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Signed curvature 1/circumradius through three points; positive for a
/// counter-clockwise turn, 0 for collinear or coincident points.
double curvature_three_point(Point2 a, Point2 b, Point2 c);

struct LCurve {
  std::vector<double> lambdas;
  std::vector<Point2> points;      ///< (log max(E, 1e-300), log max(R, 1e-300))
  std::vector<double> curvature;   ///< 0 at the two end points
};

struct LambdaSelection {
  double lambda = 0.0;
  LCurve curve;
  bool degenerate = false;  ///< every curvature was 0; lambda_min returned
};

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Evaluates the regularized solution on a log grid over lambda_range(e) and
/// returns the lambda of maximal interior curvature, ties to the larger lambda.
LambdaSelection select_lambda(const Triplet& t, RegularizerKind kind, const GenEig& e,
                              std::size_t grid_size = 60, double rtol = kRankTolerance);

/// Same over an explicit range [lo, hi]. A degenerate range returns lo.
LambdaSelection select_lambda(const Triplet& t, RegularizerKind kind, const GenEig& e, double lo,
                              double hi, std::size_t grid_size);

/// Corner of a precomputed curve: argmax of interior curvature.
std::size_t corner_index(const LCurve& curve, bool* degenerate = nullptr);

}  // namespace nlkl
