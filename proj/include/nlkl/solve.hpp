#pragma once

// Generalized eigenproblem of (A, B), the three Tikhonov regularizers and
// regularized least-squares solves.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlkl/assembly.hpp"
#include "nlkl/basis.hpp"
#include "nlkl/operator.hpp"

namespace nlkl {

/// Relative threshold below which eigenvalues count as zero.
inline constexpr double kRankTolerance = 1e-12;

struct GenEig {
  Eigen::VectorXd eigenvalues;  ///< nonincreasing, clipped at 0
  Eigen::MatrixXd V;            ///< A V = B V diag(eigenvalues), V^T B V = I
  Eigen::MatrixXd BV;           ///< B V, which equals V^{-T}

  double max_eigenvalue() const { return eigenvalues.size() ? eigenvalues[0] : 0.0; }
};

/// Cholesky reduction B = L L^T, eigendecomposition of L^{-1} A L^{-T}.
/// Throws FactorizationFailure when B is not positive definite.
GenEig gen_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
GenEig gen_eig(const Triplet& t);

/// (BV) diag(1/lambda_k) (BV)^T over lambda_k > rtol lambda_max; the
/// pseudo-inverse of V Lambda V^T.
Eigen::MatrixXd rkhs_norm_matrix(const GenEig& e, double rtol = kRankTolerance);

enum class RegularizerKind { L2small, L2rho, RKHS };

/// "l2", "L2", "rkhs".
std::string to_string(RegularizerKind kind);
RegularizerKind regularizer_from_string(const std::string& name);

/// I, B or B_rkhs.
Eigen::MatrixXd regularizer_matrix(const Triplet& t, RegularizerKind kind, const GenEig& e);

struct SolveInfo {
  bool ill_conditioned = false;   ///< condition estimate above 1e14
  bool pseudo_inverse = false;    ///< system was singular; minimum-norm solution used
};

/// argmin c^T (A + lambda Breg) c - 2 c^T b by LDL^T; falls back to the
/// eigen pseudo-inverse when the system is numerically singular.
Eigen::VectorXd solve_regularized(const Triplet& t, RegularizerKind kind, double lambda,
                                  const GenEig& e, SolveInfo* info = nullptr);

/// The same minimizers for many lambda from one spectral decomposition.
class RegularizationPath {
 public:
  RegularizationPath(const Triplet& t, RegularizerKind kind, const GenEig& e,
                     double rtol = kRankTolerance);

  Eigen::VectorXd solve(double lambda) const;
  /// c^T A c - 2 c^T b + Cf.
  double loss(const Eigen::VectorXd& c) const;
  /// c^T Breg c.
  double penalty(const Eigen::VectorXd& c) const;

 private:
  Eigen::VectorXd coordinates(double lambda) const;

  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  double Cf_ = 0.0;
  RegularizerKind kind_;
  Eigen::MatrixXd basis_;   // columns of the diagonalizing basis
  Eigen::VectorXd spectrum_;
  Eigen::VectorXd beta_;    // basis^T b
  Eigen::MatrixXd Breg_;
  double floor_ = 0.0;
};

struct FsoiSpectrum {
  std::size_t rank = 0;
  std::vector<double> eigenvalues;
};

/// rank = #{lambda_k > rtol lambda_max}.
FsoiSpectrum fsoi_spectrum(const GenEig& e, double rtol = kRankTolerance);

struct KernelEstimate {
  BSplineBasis basis;
  Eigen::VectorXd coefficients;
  double lambda = 0.0;
  double loss = 0.0;
  RegularizerKind regularizer = RegularizerKind::RKHS;
  std::vector<double> eigenvalues;

  double operator()(double r) const;
  std::vector<double> tabulate(double dx, std::size_t K) const;
};

/// sqrt(sum_k (est - truth)^2 w_k / sum_k truth^2 w_k) over the bins of rho.
/// Throws ZeroTruth when the denominator vanishes.
double relative_l2rho_error(const KernelEstimate& est, const RadialKernel& truth,
                            const ExplorationMeasure& rho);

/// Same with the estimate given on the bins of rho.
double relative_l2rho_error(std::span<const double> est_bins, const RadialKernel& truth,
                            const ExplorationMeasure& rho);

struct RieszData {
  std::vector<double> values;         ///< gf(k) dx / w_k
  std::vector<std::uint8_t> defined;  ///< w_k > 0
};

/// Discrete representer phi^f of the data functional in L2(rho):
/// sum_k phi^f(r_k) psi(r_k) w_k = sum_k psi(r_k) gf(k) dx.
RieszData riesz_representer(const RegressionData& reg);

}  // namespace nlkl
