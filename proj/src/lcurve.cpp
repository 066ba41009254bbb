#include "nlkl/lcurve.hpp"

#include <algorithm>
#include <cmath>

#include "nlkl/errors.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {

std::pair<double, double> lambda_range(const GenEig& e, double rtol) {
  double top = 0.0;
  double smallest = 0.0;
  for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
    const double v = e.eigenvalues[k];
    if (v > 0.0) {
      top = std::max(top, v);
      smallest = smallest == 0.0 ? v : std::min(smallest, v);
    }
  }
  if (!(top > 0.0)) throw Error(ErrorCode::NoPositiveSpectrum, "no positive generalized eigenvalue");
  return {std::max(smallest, rtol * top), top};
}

double curvature_three_point(Point2 a, Point2 b, Point2 c) {
  const double ab = std::hypot(b.x - a.x, b.y - a.y);
  const double bc = std::hypot(c.x - b.x, c.y - b.y);
  const double ac = std::hypot(c.x - a.x, c.y - a.y);
  const double denom = ab * bc * ac;
  if (!(denom > 0.0)) return 0.0;
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return 2.0 * cross / denom;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1 || lo == hi) return std::vector<double>(count == 1 ? 1 : count, lo);
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::size_t corner_index(const LCurve& curve, bool* degenerate) {
  std::size_t best = 0;
  double best_kappa = 0.0;
  bool found = false;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
    const double k = curve.curvature[i];
    if (k == 0.0) continue;
    if (!found || k >= best_kappa) {
      best = i;
      best_kappa = k;
      found = true;
    }
  }
  if (degenerate) *degenerate = !found;
  return best;
}

LambdaSelection select_lambda(const Triplet& t, RegularizerKind kind, const GenEig& e, double lo,
                              double hi, std::size_t grid_size) {
  if (!(lo > 0.0) || !(hi >= lo)) throw Error(ErrorCode::InvalidArgument, "lambda range must satisfy 0 < lo <= hi");
  LambdaSelection sel;
  if (lo == hi) {
    sel.lambda = lo;
    sel.curve.lambdas = {lo};
    sel.curve.points = {Point2{}};
    sel.curve.curvature = {0.0};
    sel.degenerate = true;
    const RegularizationPath path(t, kind, e);
    const Eigen::VectorXd c = path.solve(lo);
    sel.curve.points[0] = {std::log(std::max(path.loss(c), 1e-300)),
                           std::log(std::max(path.penalty(c), 1e-300))};
    return sel;
  }
  if (grid_size < 5) throw Error(ErrorCode::InvalidArgument, "L-curve needs at least 5 points");

  const RegularizationPath path(t, kind, e);
  LCurve& curve = sel.curve;
  curve.lambdas = log_grid(lo, hi, grid_size);
  curve.points.resize(grid_size);
  parallel_for(grid_size, [&](std::size_t i) {
    const Eigen::VectorXd c = path.solve(curve.lambdas[i]);
    curve.points[i] = {std::log(std::max(path.loss(c), 1e-300)),
                       std::log(std::max(path.penalty(c), 1e-300))};
  });
  curve.curvature.assign(grid_size, 0.0);
  for (std::size_t i = 1; i + 1 < grid_size; ++i) {
    curve.curvature[i] = curvature_three_point(curve.points[i - 1], curve.points[i], curve.points[i + 1]);
  }
  bool degenerate = false;
  const std::size_t best = corner_index(curve, &degenerate);
  sel.degenerate = degenerate;
  sel.lambda = degenerate ? lo : curve.lambdas[best];
  return sel;
}

LambdaSelection select_lambda(const Triplet& t, RegularizerKind kind, const GenEig& e,
                              std::size_t grid_size, double rtol) {
  const auto [lo, hi] = lambda_range(e, rtol);
  return select_lambda(t, kind, e, lo, hi, grid_size);
}

}  // namespace nlkl
