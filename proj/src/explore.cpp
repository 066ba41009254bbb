#include "nlkl/explore.hpp"

#include <algorithm>
#include <cmath>

#include "nlkl/errors.hpp"
#include "nlkl/operator.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {

double ExplorationMeasure::support_radius(double floor) const {
  for (std::size_t k = weights.size(); k > 0; --k) {
    if (weights[k - 1] > floor) return r(k);
  }
  return 0.0;
}

ExplorationMeasure ExplorationMeasure::truncated(double R) const {
  const std::size_t K = bins_within(R, dr);
  ExplorationMeasure out;
  out.dr = dr;
  out.truncated_to = R;
  out.raw_mass = raw_mass;
  out.weights.assign(K, 0.0);
  const std::size_t keep = std::min(K, weights.size());
  std::copy_n(weights.begin(), keep, out.weights.begin());
  double total = 0.0;
  for (double w : out.weights) total += w;
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateData, "exploration measure has no mass below R");
  for (double& w : out.weights) w /= total;
  return out;
}

ExplorationMeasure exploration_measure(const Dataset& d, double R0cap) {
  if (!(R0cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "R0cap must be > 0");
  const UniformGrid& grid = d.grid();
  const std::size_t n = grid.count;
  const std::size_t K = std::min(bins_within(R0cap, grid.dx), n - 1);
  const simd::KernelTable& kt = simd::active();

  // Per-pair histograms, merged per bin in sorted order so the result does
  // not depend on pair order.
  std::vector<std::vector<double>> partial(d.size());
  parallel_for(d.size(), [&](std::size_t i) {
    const auto u = d.pairs()[i].u.values();
    std::vector<double>& h = partial[i];
    h.resize(K);
    for (std::size_t k = 1; k <= K; ++k) h[k - 1] = 2.0 * kt.abs_diff_sum(u.data(), n, k);
  });

  ExplorationMeasure m;
  m.dr = grid.dx;
  m.truncated_to = static_cast<double>(K) * grid.dx;
  m.weights.assign(K, 0.0);
  std::vector<double> column(d.size());
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < d.size(); ++i) column[i] = partial[i][k];
    std::sort(column.begin(), column.end());
    double s = 0.0;
    for (double v : column) s += v;
    m.weights[k] = s;
  }
  double total = 0.0;
  for (double w : m.weights) total += w;
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateData, "all u_i are constant on the grid");
  m.raw_mass = total;
  for (double& w : m.weights) w /= total;
  return m;
}

ExplorationMeasure exploration_measure(const Dataset& d) {
  const UniformGrid& g = d.grid();
  return exploration_measure(d, 0.5 * (g.right() - g.x0));
}

SupportEstimate estimate_support(const Dataset& d, const ExplorationMeasure& rho,
                                 double threshold) {
  if (rho.weights.empty()) throw Error(ErrorCode::InvalidArgument, "empty exploration measure");
  SupportEstimate s;
  s.R_rho = rho.support_radius();
  double widest = 0.0;
  for (const DataPair& p : d.pairs()) {
    const auto [lu, ru] = support_bounds(p.u, threshold);
    const auto [lf, rf] = support_bounds(p.f, threshold, p.observed);
    const double left = std::fabs(lf - lu);
    const double right = std::fabs(rf - ru);
    s.per_pair_ranges.push_back(left);
    s.per_pair_ranges.push_back(right);
    widest = std::max({widest, left, right});
  }
  s.R = 1.1 * std::min(s.R_rho, widest);
  if (!(s.R > 0.0)) {
    throw Error(ErrorCode::DegenerateSupport, "estimated kernel support is empty (R = 0)");
  }
  return s;
}

}  // namespace nlkl
