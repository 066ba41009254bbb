#include "nlkl/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlkl/errors.hpp"
#include "nlkl/operator.hpp"

namespace nlkl {
namespace {

// Bin radii k dr can land an ulp past R; they belong to the end point.
double snap_to_end(double r, double R) { return r > R && r <= R * (1.0 + 1e-12) ? R : r; }

}  // namespace

KnotVector::KnotVector(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two knots");
  if (knots_.front() != 0.0) throw Error(ErrorCode::InvalidArgument, "first knot must be 0");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] >= knots_[i - 1])) throw Error(ErrorCode::InvalidArgument, "knots must be nondecreasing");
  }
  if (!(knots_.back() > 0.0)) throw Error(ErrorCode::InvalidArgument, "last knot must be > 0");
}

BSplineBasis::BSplineBasis(KnotVector knots, int degree) : knots_(std::move(knots)), degree_(degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "degree must be >= 0");
  const long m = static_cast<long>(knots_.size()) - 1;
  if (m - degree <= 0) throw Error(ErrorCode::InvalidArgument, "too few knots for the degree");
  dimension_ = static_cast<std::size_t>(m - degree);

  const double h = knots_.back() / static_cast<double>(m);
  padded_.reserve(knots_.size() + 2 * static_cast<std::size_t>(degree));
  for (int j = degree; j > 0; --j) padded_.push_back(-h * j);
  for (double t : knots_.knots()) padded_.push_back(t);
  for (int j = 1; j <= degree; ++j) padded_.push_back(knots_.back() + h * j);
}

double BSplineBasis::eval(std::size_t i, double r) const {
  if (i >= dimension_) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  const auto& t = knots_.knots();
  const double R = t.back();
  r = snap_to_end(r, R);
  if (r < 0.0 || r > R) return 0.0;
  const int p = degree_;

  // Degree-0 functions N_{i+j,0}, j = 0..p, then raise the degree in place.
  std::vector<double> N(static_cast<std::size_t>(p) + 1);
  for (int j = 0; j <= p; ++j) {
    const double a = t[i + j];
    const double b = t[i + j + 1];
    const bool inside = (a <= r && r < b) || (r == R && b == R && a < b);
    N[j] = inside ? 1.0 : 0.0;
  }
  for (int q = 1; q <= p; ++q) {
    for (int j = 0; j + q <= p; ++j) {
      const std::size_t k = i + j;
      double v = 0.0;
      const double d1 = t[k + q] - t[k];
      if (d1 > 0.0) v += (r - t[k]) / d1 * N[j];
      const double d2 = t[k + q + 1] - t[k + 1];
      if (d2 > 0.0) v += (t[k + q + 1] - r) / d2 * N[j + 1];
      N[j] = v;
    }
  }
  return N[0];
}

long BSplineBasis::span_of(double r) const {
  const double R = knots_.back();
  r = snap_to_end(r, R);
  if (r < 0.0 || r > R) return -1;
  const long p = degree_;
  const long last = p + static_cast<long>(knots_.size()) - 1;  // padded index of R
  long s;
  if (r == R) {
    s = last - 1;
    while (padded_[s] == padded_[s + 1]) --s;
  } else {
    s = static_cast<long>(std::upper_bound(padded_.begin(), padded_.end(), r) - padded_.begin()) - 1;
  }
  return s;
}

BSplineBasis::Nonzero BSplineBasis::eval_nonzero(double r) const {
  Nonzero out;
  const long s = span_of(r);
  if (s < 0) return out;
  const int p = degree_;
  const auto& U = padded_;
  std::vector<double> N(p + 1, 0.0), left(p + 1, 0.0), right(p + 1, 0.0);
  N[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = r - U[s + 1 - j];
    right[j] = U[s + j] - r;
    double saved = 0.0;
    for (int q = 0; q < j; ++q) {
      const double temp = N[q] / (right[q + 1] + left[j - q]);
      N[q] = saved + right[q + 1] * temp;
      saved = left[j - q] * temp;
    }
    N[j] = saved;
  }
  // Padded function index s - p + q maps to basis index s - 2p + q.
  const long base = s - 2L * p;
  const long lo = std::max(0L, base);
  const long hi = std::min(static_cast<long>(dimension_) - 1, base + p);
  if (lo > hi) return out;
  out.first = static_cast<std::size_t>(lo);
  for (long i = lo; i <= hi; ++i) out.values.push_back(N[i - base]);
  return out;
}

double BSplineBasis::evaluate(std::span<const double> c, double r) const {
  if (c.size() != dimension_) throw Error(ErrorCode::LengthMismatch, "coefficient count differs from dimension");
  const Nonzero nz = eval_nonzero(r);
  double v = 0.0;
  for (std::size_t q = 0; q < nz.values.size(); ++q) v += c[nz.first + q] * nz.values[q];
  return v;
}

Eigen::MatrixXd BSplineBasis::design_matrix(std::span<const double> radii) const {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(radii.size()),
                                              static_cast<Eigen::Index>(dimension_));
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const Nonzero nz = eval_nonzero(radii[k]);
    for (std::size_t q = 0; q < nz.values.size(); ++q) {
      phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(nz.first + q)) = nz.values[q];
    }
  }
  return phi;
}

BSplineBasis make_uniform_basis(double R, std::size_t n, int degree) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "basis range must be > 0");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "basis dimension must be >= 1");
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "degree must be >= 0");
  // Degree 0 gets no extra knot: a zero-width first interval would give an
  // identically zero function.
  const std::size_t points = degree == 0 ? n + 1 : n + static_cast<std::size_t>(degree);
  std::vector<double> t;
  t.reserve(points + 1);
  if (degree > 0) t.push_back(0.0);
  for (std::size_t j = 0; j < points; ++j) {
    t.push_back(j + 1 == points ? R : R * static_cast<double>(j) / static_cast<double>(points - 1));
  }
  return BSplineBasis(KnotVector(std::move(t)), degree);
}

std::vector<HypothesisSpace> make_hypothesis_spaces(double R, double dx, int degree,
                                                    std::size_t count) {
  if (degree < 0 || degree > 3) throw Error(ErrorCode::InvalidRange, "degree must be 0..3");
  if (!(R > 0.0) || !(dx > 0.0)) throw Error(ErrorCode::InvalidRange, "R and dx must be > 0");
  if (count == 0) throw Error(ErrorCode::InvalidRange, "ladder needs at least one dimension");
  const std::size_t top = bins_within(R, dx);
  const std::size_t least = static_cast<std::size_t>(degree) + 1;
  if (top < least) {
    throw Error(ErrorCode::InvalidRange, "floor(R/dx) = " + std::to_string(top) +
                                             " leaves no room for degree " + std::to_string(degree));
  }
  const double lo = std::max(0.2 * static_cast<double>(top), static_cast<double>(least));
  const double hi = static_cast<double>(top);
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const auto n = static_cast<std::size_t>(std::lround(lo + (hi - lo) * f));
    if (dims.empty() || dims.back() != n) dims.push_back(std::max(n, least));
  }
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  return make_hypothesis_spaces(R, degree, dims);
}

std::vector<HypothesisSpace> make_hypothesis_spaces(double R, int degree,
                                                    std::span<const std::size_t> dimensions) {
  std::vector<HypothesisSpace> out;
  out.reserve(dimensions.size());
  for (std::size_t n : dimensions) {
    out.push_back({make_uniform_basis(R, n, degree),
                   "bspline p=" + std::to_string(degree) + " n=" + std::to_string(n)});
  }
  return out;
}

std::vector<double> bin_radii(const ExplorationMeasure& rho) {
  std::vector<double> r(rho.size());
  for (std::size_t k = 1; k <= rho.size(); ++k) r[k - 1] = rho.r(k);
  return r;
}

Eigen::MatrixXd basis_gram(const Eigen::MatrixXd& phi, const ExplorationMeasure& rho) {
  if (static_cast<std::size_t>(phi.rows()) != rho.size()) {
    throw Error(ErrorCode::LengthMismatch, "design matrix rows differ from measure bins");
  }
  const Eigen::Map<const Eigen::VectorXd> w(rho.weights.data(), static_cast<Eigen::Index>(rho.size()));
  Eigen::MatrixXd B = phi.transpose() * w.asDiagonal() * phi;
  // Exact symmetry regardless of the product's evaluation order.
  B = (0.5 * (B + B.transpose())).eval();
  return B;
}

Eigen::MatrixXd basis_gram(const HypothesisSpace& h, const ExplorationMeasure& rho) {
  const std::vector<double> r = bin_radii(rho);
  return basis_gram(h.basis.design_matrix(r), rho);
}

}  // namespace nlkl
