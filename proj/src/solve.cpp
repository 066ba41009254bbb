#include "nlkl/solve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlkl/errors.hpp"

namespace nlkl {
namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

// Eigenpairs of a symmetric matrix, eigenvalues nonincreasing.
void sorted_eigen(const Eigen::MatrixXd& M, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::FactorizationFailure, "symmetric eigensolver failed");
  const Eigen::Index n = M.rows();
  values.resize(n);
  vectors.resize(n, n);
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    values[k] = es.eigenvalues()[n - 1 - k];
    vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
}

Eigen::VectorXd pseudo_inverse_solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  Eigen::VectorXd s;
  Eigen::MatrixXd Q;
  sorted_eigen(symmetrized(M), s, Q);
  const double top = s.size() ? std::fabs(s[0]) : 0.0;
  Eigen::VectorXd y = Q.transpose() * b;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    y[k] = std::fabs(s[k]) > kRankTolerance * top ? y[k] / s[k] : 0.0;
  }
  return Q * y;
}

}  // namespace

GenEig gen_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw Error(ErrorCode::LengthMismatch, "generalized eigenproblem needs square matrices of one size");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrized(B));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailure, "B is not numerically positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  // C = L^{-1} A L^{-T}
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose().eval());
  GenEig e;
  Eigen::MatrixXd W;
  sorted_eigen(symmetrized(C), e.eigenvalues, W);
  e.eigenvalues = e.eigenvalues.cwiseMax(0.0);
  e.V = L.transpose().triangularView<Eigen::Upper>().solve(W);
  e.BV = L * W;
  return e;
}

GenEig gen_eig(const Triplet& t) { return gen_eig(t.A, t.B); }

Eigen::MatrixXd rkhs_norm_matrix(const GenEig& e, double rtol) {
  const double top = e.max_eigenvalue();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(e.eigenvalues.size());
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    if (e.eigenvalues[k] > rtol * top && e.eigenvalues[k] > 0.0) inv[k] = 1.0 / e.eigenvalues[k];
  }
  return symmetrized(e.BV * inv.asDiagonal() * e.BV.transpose());
}

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::L2small: return "l2";
    case RegularizerKind::L2rho: return "L2";
    case RegularizerKind::RKHS: return "rkhs";
  }
  return "rkhs";
}

RegularizerKind regularizer_from_string(const std::string& name) {
  if (name == "l2") return RegularizerKind::L2small;
  if (name == "L2") return RegularizerKind::L2rho;
  if (name == "rkhs" || name == "RKHS") return RegularizerKind::RKHS;
  throw Error(ErrorCode::Config, "unknown regularizer '" + name + "' (expected l2, L2 or rkhs)");
}

Eigen::MatrixXd regularizer_matrix(const Triplet& t, RegularizerKind kind, const GenEig& e) {
  switch (kind) {
    case RegularizerKind::L2small: return Eigen::MatrixXd::Identity(t.A.rows(), t.A.cols());
    case RegularizerKind::L2rho: return t.B;
    case RegularizerKind::RKHS: return rkhs_norm_matrix(e);
  }
  return t.B;
}

Eigen::VectorXd solve_regularized(const Triplet& t, RegularizerKind kind, double lambda,
                                  const GenEig& e, SolveInfo* info) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  const Eigen::MatrixXd M = symmetrized(t.A + lambda * regularizer_matrix(t, kind, e));
  SolveInfo local;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  const double rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
  local.ill_conditioned = !(rcond >= 1e-14);
  Eigen::VectorXd c;
  if (local.ill_conditioned) {
    local.pseudo_inverse = true;
    c = pseudo_inverse_solve(M, t.b);
  } else {
    c = ldlt.solve(t.b);
  }
  if (info) *info = local;
  return c;
}

RegularizationPath::RegularizationPath(const Triplet& t, RegularizerKind kind, const GenEig& e,
                                       double rtol)
    : A_(t.A), b_(t.b), Cf_(t.Cf), kind_(kind) {
  if (kind == RegularizerKind::L2small) {
    sorted_eigen(symmetrized(t.A), spectrum_, basis_);
    spectrum_ = spectrum_.cwiseMax(0.0);
  } else {
    basis_ = e.V;
    spectrum_ = e.eigenvalues;
  }
  floor_ = rtol * (spectrum_.size() ? spectrum_[0] : 0.0);
  beta_ = basis_.transpose() * t.b;
  Breg_ = regularizer_matrix(t, kind, e);
}

Eigen::VectorXd RegularizationPath::coordinates(double lambda) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(beta_.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double s = spectrum_[k];
    if (kind_ == RegularizerKind::RKHS) {
      // Directions outside the identifiable space carry no penalty and no data.
      if (s > floor_ && s > 0.0) y[k] = beta_[k] / (s + lambda / s);
    } else {
      const double d = s + lambda;
      if (d > floor_ && d > 0.0) y[k] = beta_[k] / d;
    }
  }
  return y;
}

Eigen::VectorXd RegularizationPath::solve(double lambda) const { return basis_ * coordinates(lambda); }

double RegularizationPath::loss(const Eigen::VectorXd& c) const {
  return c.dot(A_ * c) - 2.0 * c.dot(b_) + Cf_;
}

double RegularizationPath::penalty(const Eigen::VectorXd& c) const { return c.dot(Breg_ * c); }

FsoiSpectrum fsoi_spectrum(const GenEig& e, double rtol) {
  FsoiSpectrum s;
  const double top = e.max_eigenvalue();
  s.eigenvalues.assign(e.eigenvalues.data(), e.eigenvalues.data() + e.eigenvalues.size());
  for (double v : s.eigenvalues) {
    if (v > rtol * top && v > 0.0) ++s.rank;
  }
  return s;
}

double KernelEstimate::operator()(double r) const {
  return basis.evaluate(std::span<const double>(coefficients.data(), static_cast<std::size_t>(coefficients.size())), r);
}

std::vector<double> KernelEstimate::tabulate(double dx, std::size_t K) const {
  std::vector<double> out(K);
  for (std::size_t k = 1; k <= K; ++k) out[k - 1] = (*this)(static_cast<double>(k) * dx);
  return out;
}

double relative_l2rho_error(std::span<const double> est_bins, const RadialKernel& truth,
                            const ExplorationMeasure& rho) {
  if (est_bins.size() != rho.size()) throw Error(ErrorCode::LengthMismatch, "estimate bins differ from measure bins");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 1; k <= rho.size(); ++k) {
    const double w = rho.weight(k);
    const double t = truth(rho.r(k));
    const double diff = est_bins[k - 1] - t;
    num += diff * diff * w;
    den += t * t * w;
  }
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroTruth, "true kernel vanishes on the support of rho");
  return std::sqrt(num / den);
}

double relative_l2rho_error(const KernelEstimate& est, const RadialKernel& truth,
                            const ExplorationMeasure& rho) {
  const std::vector<double> bins = est.tabulate(rho.dr, rho.size());
  return relative_l2rho_error(bins, truth, rho);
}

RieszData riesz_representer(const RegressionData& reg) {
  RieszData out;
  const std::size_t K = reg.K();
  out.values.assign(K, 0.0);
  out.defined.assign(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    const double w = reg.rho.weights[k];
    if (w > 0.0) {
      out.values[k] = reg.gf[static_cast<Eigen::Index>(k)] * reg.dx / w;
      out.defined[k] = 1;
    }
  }
  return out;
}

}  // namespace nlkl
