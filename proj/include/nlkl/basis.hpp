#pragma once

// B-spline hypothesis spaces on [0, R] and their Gram matrices in L2(rho).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlkl/explore.hpp"

namespace nlkl {

class KnotVector {
 public:
  KnotVector() = default;
  /// Nondecreasing, at least two knots, first knot 0.
  explicit KnotVector(std::vector<double> knots);

  const std::vector<double>& knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  double operator[](std::size_t i) const { return knots_[i]; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

 private:
  std::vector<double> knots_;
};

class BSplineBasis {
 public:
  BSplineBasis() = default;
  /// Dimension is m - p for knots r_0..r_m; throws InvalidArgument if <= 0.
  BSplineBasis(KnotVector knots, int degree);

  const KnotVector& knots() const { return knots_; }
  int degree() const { return degree_; }
  std::size_t dimension() const { return dimension_; }
  double right() const { return knots_.back(); }

  /// N_{i,p}(r) by the Cox-de Boor recurrence, 0/0 := 0. The right end R
  /// belongs to the last nonempty interval; zero outside [0, R].
  double eval(std::size_t i, double r) const;

  /// Values of the (at most p + 1) functions that can be nonzero at r,
  /// starting at index `first`. Same values as eval, by the triangular
  /// de Boor scheme.
  struct Nonzero {
    std::size_t first = 0;
    std::vector<double> values;
  };
  Nonzero eval_nonzero(double r) const;

  /// sum_i c_i N_{i,p}(r).
  double evaluate(std::span<const double> c, double r) const;

  /// Phi(k, i) = N_i(r_k) for the given radii.
  Eigen::MatrixXd design_matrix(std::span<const double> radii) const;

 private:
  // Index s of the interval [t_s, t_{s+1}) containing r in the padded knot
  // sequence; -1 outside [0, R].
  long span_of(double r) const;

  KnotVector knots_;
  int degree_ = 0;
  std::size_t dimension_ = 0;
  // Knots padded with p extra points on each side so the de Boor triangle
  // never reads outside the array; padded[j + p] = knots[j].
  std::vector<double> padded_;
};

/// n functions of degree p on [0, R]: n + p evenly spaced knots on [0, R]
/// plus one extra knot at 0 (only for p >= 1).
BSplineBasis make_uniform_basis(double R, std::size_t n, int degree);

struct HypothesisSpace {
  BSplineBasis basis;
  std::string label;
};

/// `count` dimensions linearly spaced over [0.2, 1] floor(R/dx), each at
/// least p + 1, duplicates dropped. Throws InvalidRange when floor(R/dx) < p + 1
/// or the degree is outside 0..3.
std::vector<HypothesisSpace> make_hypothesis_spaces(double R, double dx, int degree,
                                                    std::size_t count = 8);

/// Spaces for explicitly listed dimensions.
std::vector<HypothesisSpace> make_hypothesis_spaces(double R, int degree,
                                                    std::span<const std::size_t> dimensions);

/// B(i, j) = sum_k N_i(r_k) N_j(r_k) w_k over the bins of rho.
Eigen::MatrixXd basis_gram(const HypothesisSpace& h, const ExplorationMeasure& rho);

/// Same, from a design matrix on the bins of rho.
Eigen::MatrixXd basis_gram(const Eigen::MatrixXd& phi, const ExplorationMeasure& rho);

/// r_k = k dr for k = 1..rho.size().
std::vector<double> bin_radii(const ExplorationMeasure& rho);

}  // namespace nlkl
