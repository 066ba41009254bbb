#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "nlkl/basis.hpp"
#include "nlkl/errors.hpp"
#include "support.hpp"

using namespace nlkl;

TEST_CASE("low-degree closed forms") {
  const BSplineBasis b0(KnotVector({0.0, 1.0, 2.0}), 0);
  CHECK(b0.dimension() == 2);
  CHECK(b0.eval(0, 0.5) == 1.0);
  CHECK(b0.eval(0, 1.5) == 0.0);
  CHECK(b0.eval(1, 2.0) == 1.0);

  const BSplineBasis b1(KnotVector({0.0, 1.0, 2.0}), 1);
  CHECK(b1.dimension() == 1);
  CHECK(b1.eval(0, 1.0) == 1.0);
  CHECK(b1.eval(0, 0.25) == 0.25);
  CHECK(b1.eval(0, 1.5) == 0.5);

  // repeated knot at 0: 0/0 terms vanish and N_0 starts at 1
  const BSplineBasis rep(KnotVector({0.0, 0.0, 1.0, 2.0}), 1);
  CHECK(rep.eval(0, 0.0) == 1.0);
  CHECK(rep.eval(0, 0.5) == 0.5);
  CHECK(rep.eval(1, 2.0) == 0.0);

  CHECK_THROWS_AS(KnotVector({0.0, 2.0, 1.0}), Error);
  CHECK_THROWS_AS(KnotVector({0.5, 1.0}), Error);
  CHECK_THROWS_AS(BSplineBasis(KnotVector({0.0, 1.0}), 1), Error);
}

TEST_CASE("uniform basis layout") {
  const BSplineBasis b = make_uniform_basis(10.0, 7, 2);
  CHECK(b.dimension() == 7);
  CHECK(b.knots().size() == 10);
  CHECK(b.knots()[0] == 0.0);
  CHECK(b.knots()[1] == 0.0);
  CHECK(b.knots()[2] == doctest::Approx(10.0 / 8.0));
  CHECK(b.right() == 10.0);
  // one extra knot gives multiplicity 2 at 0: N_0 starts from 0 for p = 2
  // and from 1 for p = 1
  CHECK(b.eval(0, 0.0) == 0.0);
  CHECK(b.eval(0, 0.1) > 0.0);
  CHECK(make_uniform_basis(10.0, 7, 1).eval(0, 0.0) == 1.0);

  const BSplineBasis d0 = make_uniform_basis(3.0, 3, 0);
  CHECK(d0.knots().size() == 4);
  CHECK(d0.eval(1, 1.5) == 1.0);
}

TEST_CASE("partition of unity, nonnegativity and local support") {
  std::mt19937_64 rng(53);
  for (int p = 0; p <= 3; ++p) {
    CAPTURE(p);
    const double R = 7.3;
    const BSplineBasis b = make_uniform_basis(R, 12, p);
    const auto& t = b.knots();
    const std::size_t m = t.size() - 1;
    std::uniform_real_distribution<double> inner(t[p], t[m - p]);
    std::uniform_real_distribution<double> any(-0.5, R + 0.5);
    for (int s = 0; s < 1000; ++s) {
      const double r = inner(rng);
      double sum = 0.0;
      for (std::size_t i = 0; i < b.dimension(); ++i) sum += b.eval(i, r);
      REQUIRE(std::abs(sum - 1.0) <= 1e-12);

      const double q = any(rng);
      for (std::size_t i = 0; i < b.dimension(); ++i) {
        const double v = b.eval(i, q);
        REQUIRE(v >= -1e-12);
        if (q < t[i] || q > t[i + p + 1]) REQUIRE(v == 0.0);
      }
    }
    // a simple knot at R: every function is continuous there, so only the
    // piecewise-constant basis is nonzero at the end point
    double sum = 0.0;
    for (std::size_t i = 0; i < b.dimension(); ++i) sum += b.eval(i, R);
    CHECK(sum == (p == 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("triangular evaluation matches the recurrence") {
  std::mt19937_64 rng(59);
  for (int p = 0; p <= 3; ++p) {
    const BSplineBasis b = make_uniform_basis(5.0, 9, p);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    std::vector<double> samples{0.0, 5.0, b.knots()[3]};
    for (int s = 0; s < 300; ++s) samples.push_back(dist(rng));
    const auto c = testing_support::random_vector(rng, b.dimension());
    for (double r : samples) {
      const auto nz = b.eval_nonzero(r);
      double direct = 0.0;
      for (std::size_t i = 0; i < b.dimension(); ++i) {
        const double v = b.eval(i, r);
        direct += c[i] * v;
        const bool in = i >= nz.first && i < nz.first + nz.values.size();
        const double w = in ? nz.values[i - nz.first] : 0.0;
        REQUIRE(std::abs(v - w) <= 1e-13);
      }
      CHECK(std::abs(b.evaluate(c, r) - direct) <= 1e-12);
    }
    CHECK(b.eval_nonzero(-0.1).values.empty());
    CHECK(b.eval_nonzero(5.1).values.empty());

    const std::vector<double> radii{0.5, 1.0, 4.99};
    const Eigen::MatrixXd D = b.design_matrix(radii);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      for (std::size_t i = 0; i < b.dimension(); ++i) CHECK(D(k, i) == doctest::Approx(b.eval(i, radii[k])).epsilon(1e-13));
    }
  }
}

TEST_CASE("hypothesis-space ladder") {
  const auto spaces = make_hypothesis_spaces(10.0, 1.0, 2);
  REQUIRE_FALSE(spaces.empty());
  for (const auto& h : spaces) {
    CHECK(h.basis.dimension() >= 2);
    CHECK(h.basis.dimension() <= 10);
    CHECK(h.basis.degree() == 2);
  }
  for (std::size_t i = 1; i < spaces.size(); ++i) CHECK(spaces[i].basis.dimension() > spaces[i - 1].basis.dimension());

  const auto fine = make_hypothesis_spaces(11.02, 0.0125, 2);
  CHECK(fine.size() == 8);
  CHECK(fine.back().basis.dimension() == 881);
  CHECK(fine.front().basis.dimension() == 176);

  try {
    make_hypothesis_spaces(2.0, 1.0, 2);
    FAIL("expected InvalidRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRange);
  }
  CHECK_THROWS_AS(make_hypothesis_spaces(10.0, 0.1, 4), Error);

  const std::size_t dims[] = {5, 9};
  const auto explicit_spaces = make_hypothesis_spaces(3.0, 1, dims);
  CHECK(explicit_spaces.size() == 2);
  CHECK(explicit_spaces[1].basis.dimension() == 9);
}

TEST_CASE("gram matrix") {
  SUBCASE("one cell per bin gives diag(rho)") {
    const double dx = 0.1;
    const std::size_t K = 12;
    std::vector<double> knots{0.0};
    for (std::size_t k = 1; k <= K; ++k) knots.push_back((static_cast<double>(k) + 0.5) * dx);
    const HypothesisSpace h{BSplineBasis(KnotVector(knots), 0), "cells"};
    std::mt19937_64 rng(61);
    ExplorationMeasure rho;
    rho.dr = dx;
    rho.weights = testing_support::random_vector(rng, K, 0.0, 1.0);
    const Eigen::MatrixXd B = basis_gram(h, rho);
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) CHECK(B(i, j) == (i == j ? rho.weights[i] : 0.0));
    }
  }
  SUBCASE("uniform rho and disjoint indicators give equal diagonal entries") {
    ExplorationMeasure rho;
    rho.dr = 1.0;
    rho.weights.assign(6, 1.0 / 6.0);
    const HypothesisSpace h{BSplineBasis(KnotVector({0.0, 2.5, 4.5, 6.0}), 0), "pairs"};
    const Eigen::MatrixXd B = basis_gram(h, rho);
    CHECK(B(0, 0) == doctest::Approx(2.0 / 6.0));
    CHECK(B(1, 1) == doctest::Approx(2.0 / 6.0));
    CHECK(B(2, 2) == doctest::Approx(2.0 / 6.0));
    CHECK(B(0, 1) == 0.0);
  }
  SUBCASE("symmetric and positive semidefinite") {
    std::mt19937_64 rng(67);
    for (int t = 0; t < 10; ++t) {
      ExplorationMeasure rho;
      rho.dr = 0.05;
      rho.weights = testing_support::random_vector(rng, 200, 0.0, 1.0);
      for (int p = 0; p <= 3; ++p) {
        const HypothesisSpace h{make_uniform_basis(10.0, 40, p), ""};
        const Eigen::MatrixXd B = basis_gram(h, rho);
        CHECK((B - B.transpose()).cwiseAbs().maxCoeff() == 0.0);
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(B).eigenvalues().minCoeff();
        CHECK(lo >= -1e-12 * B.norm());
      }
    }
  }
}
