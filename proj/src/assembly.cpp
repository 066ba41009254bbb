#include "nlkl/assembly.hpp"

#include <cmath>
#include <sstream>

#include "nlkl/errors.hpp"
#include "nlkl/operator.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {
namespace {

void zero_unobserved_rows(const DataPair& p, Eigen::MatrixXd& D) {
  if (p.observed.empty()) return;
  for (Eigen::Index j = 0; j < D.rows(); ++j) {
    if (!p.is_observed(static_cast<std::size_t>(j))) D.row(j).setZero();
  }
}

Eigen::VectorXd masked_f(const DataPair& p) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(p.f.size()));
  for (std::size_t j = 0; j < p.f.size(); ++j) f[static_cast<Eigen::Index>(j)] = p.is_observed(j) ? p.f[j] : 0.0;
  return f;
}

// Sums per-pair terms in pair order.
template <class T>
T ordered_sum(std::vector<T>& parts) {
  T total = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) total += parts[i];
  return total;
}

}  // namespace

Eigen::MatrixXd shifted_differences(const SampledFunction& u, std::size_t K, BoundaryRule rule) {
  const std::size_t n = u.size();
  Eigen::MatrixXd D(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(K));
  const simd::KernelTable& kt = simd::active();
  for (std::size_t k = 1; k <= K; ++k) {
    kt.second_difference(u.values().data(), n, k, rule, D.col(static_cast<Eigen::Index>(k - 1)).data());
  }
  return D;
}

Eigen::MatrixXd compute_G(const Dataset& d, std::size_t K, BoundaryRule rule) {
  const double dx = d.grid().dx;
  const auto Ki = static_cast<Eigen::Index>(K);
  if (K == 0) return Eigen::MatrixXd(0, 0);
  std::vector<Eigen::MatrixXd> parts(d.size());
  parallel_for(d.size(), [&](std::size_t i) {
    Eigen::MatrixXd D = shifted_differences(d.pairs()[i].u, K, rule);
    zero_unobserved_rows(d.pairs()[i], D);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(Ki, Ki);
    g.selfadjointView<Eigen::Lower>().rankUpdate(D.transpose());
    parts[i] = g.selfadjointView<Eigen::Lower>();
  });
  Eigen::MatrixXd G = ordered_sum(parts);
  G *= dx / static_cast<double>(d.size());
  return G;
}

Eigen::VectorXd compute_gf(const Dataset& d, std::size_t K, BoundaryRule rule) {
  const double dx = d.grid().dx;
  if (K == 0) return Eigen::VectorXd(0);
  std::vector<Eigen::VectorXd> parts(d.size());
  parallel_for(d.size(), [&](std::size_t i) {
    const DataPair& p = d.pairs()[i];
    const Eigen::MatrixXd D = shifted_differences(p.u, K, rule);
    parts[i] = D.transpose() * masked_f(p);
  });
  Eigen::VectorXd gf = ordered_sum(parts);
  gf *= dx / static_cast<double>(d.size());
  return gf;
}

double data_constant(const Dataset& d) {
  const double dx = d.grid().dx;
  const simd::KernelTable& kt = simd::active();
  double total = 0.0;
  for (const DataPair& p : d.pairs()) {
    const Eigen::VectorXd f = masked_f(p);
    total += kt.dot(f.data(), f.data(), static_cast<std::size_t>(f.size())) * dx;
  }
  return total / static_cast<double>(d.size());
}

std::vector<double> RegressionData::radii() const { return bin_radii(rho); }

RegressionData extract_regression_data(const Dataset& d, double R, const ExplorationMeasure& rho,
                                       BoundaryRule rule) {
  if (d.empty()) throw Error(ErrorCode::DegenerateData, "empty dataset");
  RegressionData reg;
  reg.dx = d.grid().dx;
  reg.rho = rho.truncated(R);
  const std::size_t K = reg.rho.size();
  reg.pairs = d.size();

  // D_i is formed once per pair and feeds both G and gf.
  const auto Ki = static_cast<Eigen::Index>(K);
  std::vector<Eigen::MatrixXd> gparts(d.size());
  std::vector<Eigen::VectorXd> fparts(d.size());
  parallel_for(d.size(), [&](std::size_t i) {
    const DataPair& p = d.pairs()[i];
    Eigen::MatrixXd D = shifted_differences(p.u, K, rule);
    zero_unobserved_rows(p, D);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(Ki, Ki);
    g.selfadjointView<Eigen::Lower>().rankUpdate(D.transpose());
    gparts[i] = g.selfadjointView<Eigen::Lower>();
    fparts[i] = D.transpose() * masked_f(p);
  });
  const double scale = reg.dx / static_cast<double>(d.size());
  reg.G = ordered_sum(gparts) * scale;
  reg.gf = ordered_sum(fparts) * scale;
  reg.Cf = data_constant(d);
  return reg;
}

Triplet assemble_triplet(const RegressionData& reg, const HypothesisSpace& h) {
  const std::vector<double> r = reg.radii();
  const Eigen::MatrixXd phi = h.basis.design_matrix(r);
  const double dx = reg.dx;
  Triplet t;
  t.A = phi.transpose() * reg.G * phi * (dx * dx);
  t.A = (0.5 * (t.A + t.A.transpose())).eval();
  t.b = phi.transpose() * reg.gf * dx;
  t.B = basis_gram(phi, reg.rho);
  t.Cf = reg.Cf;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.B, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kSingularBasisCondition) {
    std::ostringstream msg;
    msg << h.label << ": basis Gram matrix is singular (eigenvalues " << lo << " .. " << hi << ")";
    throw Error(ErrorCode::SingularBasis, msg.str());
  }
  return t;
}

double quadratic_loss(const Triplet& t, const Eigen::VectorXd& c) {
  return c.dot(t.A * c) - 2.0 * c.dot(t.b) + t.Cf;
}

}  // namespace nlkl
