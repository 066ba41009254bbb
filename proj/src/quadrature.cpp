#include "nlkl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "nlkl/errors.hpp"

namespace nlkl {
namespace {

// Kronrod abscissae on [0, 1); odd indices are shared with the 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol, std::span<const double> breakpoints,
                                    std::size_t max_panels) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "quadrature tolerance must be > 0");
  if (a == b) return {};
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> work;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Panel p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
    total += p.value;
    error += p.error;
    work.push(p);
  }

  while (error > tol) {
    if (work.size() >= max_panels) {
      throw Error(ErrorCode::QuadratureNoConvergence,
                  "error estimate " + std::to_string(error) + " above tolerance after " +
                      std::to_string(work.size()) + " panels");
    }
    const Panel worst = work.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorCode::QuadratureNoConvergence, "panel width reached machine precision");
    }
    work.pop();
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
  }

  // Re-sum from the panels to shed the drift of the running updates.
  double value = 0.0;
  double err = 0.0;
  const std::size_t panels = work.size();
  std::vector<Panel> all;
  all.reserve(panels);
  while (!work.empty()) {
    all.push_back(work.top());
    work.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : all) {
    value += p.value;
    err += p.error;
  }
  return {sign * value, err, panels};
}

}  // namespace nlkl
