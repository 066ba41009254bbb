#pragma once

// Exploration measure on pairwise distances and the data-adaptive support
// estimate of the kernel.

#include <cstddef>
#include <vector>

#include "nlkl/grid.hpp"

namespace nlkl {

/// Probability weights on the bins r_k = k dr, k = 1..size(); weights[k - 1]
/// belongs to r_k.
struct ExplorationMeasure {
  double dr = 1.0;
  std::vector<double> weights;
  double truncated_to = 0.0;
  /// Unnormalized mass sum_i sum_{j != k} |u_i(x_j) - u_i(x_k)| before scaling to 1.
  double raw_mass = 0.0;

  std::size_t size() const { return weights.size(); }
  double r(std::size_t k) const { return static_cast<double>(k) * dr; }
  double weight(std::size_t k) const { return weights[k - 1]; }

  /// Largest r_k whose weight exceeds `floor`; 0 if none.
  double support_radius(double floor = 1e-8) const;

  /// Restriction to the bins k = 1..floor(R/dr), renormalized to mass 1.
  /// Bins beyond the stored range are padded with zeros.
  /// Throws DegenerateData when no mass is left.
  ExplorationMeasure truncated(double R) const;
};

/// Ordered-pair histogram of |u_i(x_j) - u_i(x_k)| over distances
/// 0 < |x_j - x_k| <= R0cap, normalized to a probability measure.
/// Throws DegenerateData when every u_i is constant.
ExplorationMeasure exploration_measure(const Dataset& d, double R0cap);

/// Default prior cap: half the domain width.
ExplorationMeasure exploration_measure(const Dataset& d);

struct SupportEstimate {
  double R = 0.0;
  double R_rho = 0.0;
  /// Two entries per pair: |L^f - L^u| and |R^f - R^u|.
  std::vector<double> per_pair_ranges;
};

/// R = 1.1 min(R_rho, max_i max(|L^f_i - L^u_i|, |R^f_i - R^u_i|)), with the
/// bounds taken by support_bounds at `threshold`. f bounds ignore unobserved
/// nodes. Throws DegenerateSupport when R = 0.
SupportEstimate estimate_support(const Dataset& d, const ExplorationMeasure& rho,
                                 double threshold = 1e-8);

}  // namespace nlkl
