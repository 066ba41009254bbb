#pragma once

// Regression data {G, g^f, rho} read once from the dataset, and the normal
// system (A, b, B) for any hypothesis space built from it.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "nlkl/basis.hpp"
#include "nlkl/explore.hpp"
#include "nlkl/grid.hpp"

namespace nlkl {

/// D(j, k - 1) = u(x_{j+k}) + u(x_{j-k}) - 2 u(x_j), k = 1..K, extended by rule.
Eigen::MatrixXd shifted_differences(const SampledFunction& u, std::size_t K,
                                    BoundaryRule rule = BoundaryRule::ZeroExtension);

/// G(k, l) = (1/N) sum_i sum_j m_ij D_i(j, k) D_i(j, l) dx, with m the
/// observation mask of pair i.
Eigen::MatrixXd compute_G(const Dataset& d, std::size_t K,
                          BoundaryRule rule = BoundaryRule::ZeroExtension);

/// gf(k) = (1/N) sum_i sum_j m_ij D_i(j, k) f_i(x_j) dx.
Eigen::VectorXd compute_gf(const Dataset& d, std::size_t K,
                           BoundaryRule rule = BoundaryRule::ZeroExtension);

/// (1/N) sum_i sum_j m_ij f_i(x_j)^2 dx.
double data_constant(const Dataset& d);

struct RegressionData {
  double dx = 1.0;
  Eigen::MatrixXd G;   ///< K x K
  Eigen::VectorXd gf;  ///< K
  ExplorationMeasure rho;  ///< truncated to [0, R], K bins
  double Cf = 0.0;
  std::size_t pairs = 0;

  std::size_t K() const { return static_cast<std::size_t>(gf.size()); }
  std::vector<double> radii() const;
};

/// One pass over the data: K = floor(R/dx) bins, rho truncated to [0, R].
RegressionData extract_regression_data(const Dataset& d, double R, const ExplorationMeasure& rho,
                                       BoundaryRule rule = BoundaryRule::ZeroExtension);

struct Triplet {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd B;
  double Cf = 0.0;
};

/// Condition number above which B_n is treated as singular.
inline constexpr double kSingularBasisCondition = 1e12;

/// A = Phi^T G Phi dx^2, b = Phi^T gf dx, B = Phi^T diag(rho) Phi.
/// Throws SingularBasis when cond(B) > 1e12.
Triplet assemble_triplet(const RegressionData& reg, const HypothesisSpace& h);

/// c^T A c - 2 c^T b + Cf.
double quadratic_loss(const Triplet& t, const Eigen::VectorXd& c);

}  // namespace nlkl
