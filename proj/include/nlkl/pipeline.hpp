#pragma once

// The full learning algorithm: exploration measure and support, regression
// data, hypothesis-space ladder, per-space regularized estimates, and the
// choice of the space with the smallest loss.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlkl/assembly.hpp"
#include "nlkl/explore.hpp"
#include "nlkl/lcurve.hpp"
#include "nlkl/solve.hpp"

namespace nlkl {

struct AlgorithmOptions {
  int degree = 2;
  RegularizerKind kind = RegularizerKind::RKHS;
  std::size_t ladder_size = 8;
  std::size_t lcurve_points = 60;
  double support_threshold = 1e-8;
  double rtol = kRankTolerance;
  BoundaryRule rule = BoundaryRule::ZeroExtension;
  /// Use this R instead of estimating it from the data.
  std::optional<double> support_override;
  /// Prior cap for the exploration measure; default half the domain width.
  std::optional<double> rho_cap;
  /// Skip the L-curve and use this lambda.
  std::optional<double> fixed_lambda;
  /// Explicit dimensions instead of the default ladder.
  std::vector<std::size_t> dimensions;
};

/// Everything that depends on the data but not on the hypothesis space.
struct PreparedProblem {
  ExplorationMeasure rho_full;
  SupportEstimate support;
  RegressionData reg;
};

PreparedProblem prepare_problem(const Dataset& d, const AlgorithmOptions& opts);

struct SpaceCandidate {
  std::size_t dimension = 0;
  bool singular = false;
  std::string note;
  double lambda = 0.0;
  double loss = 0.0;
  std::size_t fsoi_rank = 0;
  bool degenerate_curve = false;
  LCurve curve;
};

struct Algorithm1Result {
  KernelEstimate estimate;
  std::vector<SpaceCandidate> candidates;
  std::size_t chosen = 0;  ///< index into candidates
  SupportEstimate support;
  ExplorationMeasure rho;  ///< truncated to [0, R]
};

/// One result per requested regularizer; triplets and eigenproblems are
/// shared between them. Throws AllSpacesSingular when no space survives.
std::vector<Algorithm1Result> run_algorithm1(const PreparedProblem& p, const AlgorithmOptions& opts,
                                             std::span<const RegularizerKind> kinds);

Algorithm1Result run_algorithm1(const Dataset& d, const AlgorithmOptions& opts = {});

}  // namespace nlkl
