#include "nlkl/pipeline.hpp"

#include <limits>

#include "nlkl/errors.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {

PreparedProblem prepare_problem(const Dataset& d, const AlgorithmOptions& opts) {
  if (d.empty()) throw Error(ErrorCode::DegenerateData, "empty dataset");
  PreparedProblem p;
  p.rho_full = opts.rho_cap ? exploration_measure(d, *opts.rho_cap) : exploration_measure(d);
  if (opts.support_override) {
    if (!(*opts.support_override > 0.0)) throw Error(ErrorCode::InvalidArgument, "support override must be > 0");
    p.support.R = *opts.support_override;
    p.support.R_rho = p.rho_full.support_radius();
  } else {
    p.support = estimate_support(d, p.rho_full, opts.support_threshold);
  }
  p.reg = extract_regression_data(d, p.support.R, p.rho_full, opts.rule);
  return p;
}

std::vector<Algorithm1Result> run_algorithm1(const PreparedProblem& p, const AlgorithmOptions& opts,
                                             std::span<const RegularizerKind> kinds) {
  const double R = p.support.R;
  const std::vector<HypothesisSpace> spaces =
      opts.dimensions.empty() ? make_hypothesis_spaces(R, p.reg.dx, opts.degree, opts.ladder_size)
                              : make_hypothesis_spaces(R, opts.degree, opts.dimensions);

  struct PerSpace {
    bool singular = false;
    std::string note;
    std::vector<SpaceCandidate> per_kind;
    std::vector<Eigen::VectorXd> coefficients;
    std::vector<double> eigenvalues;
  };
  std::vector<PerSpace> work(spaces.size());

  parallel_for(spaces.size(), [&](std::size_t s) {
    PerSpace& w = work[s];
    const std::size_t n = spaces[s].basis.dimension();
    Triplet t;
    GenEig e;
    try {
      t = assemble_triplet(p.reg, spaces[s]);
      e = gen_eig(t);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::SingularBasis && err.code() != ErrorCode::FactorizationFailure) throw;
      w.singular = true;
      w.note = err.what();
      return;
    }
    w.eigenvalues.assign(e.eigenvalues.data(), e.eigenvalues.data() + e.eigenvalues.size());
    const FsoiSpectrum fsoi = fsoi_spectrum(e, opts.rtol);
    for (RegularizerKind kind : kinds) {
      SpaceCandidate c;
      c.dimension = n;
      c.fsoi_rank = fsoi.rank;
      double lambda;
      if (opts.fixed_lambda) {
        lambda = *opts.fixed_lambda;
      } else if (fsoi.rank == 0) {
        // Data carries no information in this space; the zero estimate.
        lambda = 0.0;
        c.degenerate_curve = true;
      } else {
        LambdaSelection sel = select_lambda(t, kind, e, opts.lcurve_points, opts.rtol);
        lambda = sel.lambda;
        c.degenerate_curve = sel.degenerate;
        c.curve = std::move(sel.curve);
      }
      const RegularizationPath path(t, kind, e, opts.rtol);
      Eigen::VectorXd coef = path.solve(lambda);
      c.lambda = lambda;
      c.loss = path.loss(coef);
      w.per_kind.push_back(std::move(c));
      w.coefficients.push_back(std::move(coef));
    }
  });

  std::vector<Algorithm1Result> results(kinds.size());
  for (std::size_t q = 0; q < kinds.size(); ++q) {
    Algorithm1Result& res = results[q];
    res.support = p.support;
    res.rho = p.reg.rho;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_space = spaces.size();
    for (std::size_t s = 0; s < spaces.size(); ++s) {
      if (work[s].singular) {
        SpaceCandidate c;
        c.dimension = spaces[s].basis.dimension();
        c.singular = true;
        c.note = work[s].note;
        res.candidates.push_back(std::move(c));
        continue;
      }
      const SpaceCandidate& c = work[s].per_kind[q];
      if (c.loss < best) {
        best = c.loss;
        best_space = s;
        res.chosen = res.candidates.size();
      }
      res.candidates.push_back(c);
    }
    if (best_space == spaces.size()) {
      throw Error(ErrorCode::AllSpacesSingular, "every hypothesis space has a singular basis Gram matrix");
    }
    const SpaceCandidate& c = res.candidates[res.chosen];
    res.estimate.basis = spaces[best_space].basis;
    res.estimate.coefficients = work[best_space].coefficients[q];
    res.estimate.lambda = c.lambda;
    res.estimate.loss = c.loss;
    res.estimate.regularizer = kinds[q];
    res.estimate.eigenvalues = work[best_space].eigenvalues;
  }
  return results;
}

Algorithm1Result run_algorithm1(const Dataset& d, const AlgorithmOptions& opts) {
  const PreparedProblem p = prepare_problem(d, opts);
  const RegularizerKind kinds[] = {opts.kind};
  return std::move(run_algorithm1(p, opts, kinds).front());
}

}  // namespace nlkl
