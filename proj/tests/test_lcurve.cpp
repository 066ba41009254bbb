#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "nlkl/errors.hpp"
#include "nlkl/lcurve.hpp"
#include "support.hpp"

using namespace nlkl;

namespace {

GenEig spectrum(std::initializer_list<double> values) {
  GenEig e;
  e.eigenvalues = Eigen::VectorXd::Map(values.begin(), static_cast<Eigen::Index>(values.size()));
  e.V = Eigen::MatrixXd::Identity(e.eigenvalues.size(), e.eigenvalues.size());
  e.BV = e.V;
  return e;
}

// Diagonal toy problem with a wide spectrum and decaying data.
Triplet toy(Eigen::Index n) {
  Triplet t;
  t.A = Eigen::MatrixXd::Zero(n, n);
  t.B = Eigen::MatrixXd::Identity(n, n);
  t.b = Eigen::VectorXd(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::pow(10.0, -0.5 * static_cast<double>(k));
    t.A(k, k) = s;
    t.b[k] = s * (1.0 + 0.3 * std::cos(static_cast<double>(k))) + 1e-4;
  }
  t.Cf = t.b.squaredNorm() * 1e4;
  return t;
}

}  // namespace

TEST_CASE("lambda range") {
  const auto [lo, hi] = lambda_range(spectrum({4.0, 1.0, 1e-20}));
  CHECK(lo == doctest::Approx(4e-12));
  CHECK(hi == 4.0);
  const auto [a, b] = lambda_range(spectrum({4.0, 1.0, 0.5}));
  CHECK(a == 0.5);
  CHECK(b == 4.0);
  const auto [c, d] = lambda_range(spectrum({1.0}));
  CHECK(c == 1.0);
  CHECK(d == 1.0);
  try {
    lambda_range(spectrum({0.0, 0.0}));
    FAIL("expected NoPositiveSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPositiveSpectrum);
  }
}

TEST_CASE("three-point curvature") {
  CHECK(curvature_three_point({0, 0}, {1, 0}, {1, 1}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(curvature_three_point({1, 1}, {1, 0}, {0, 0}) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(curvature_three_point({0, 0}, {1, 1}, {3, 3}) == 0.0);
  CHECK(curvature_three_point({0, 0}, {0, 0}, {1, 2}) == 0.0);
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const auto th = testing_support::random_vector(rng, 3, 0.0, 2.0 * std::numbers::pi);
    const double r = 0.5 + 3.0 * th[0] / 7.0;
    const Point2 a{r * std::cos(th[0]), r * std::sin(th[0])};
    const Point2 b{r * std::cos(th[1]), r * std::sin(th[1])};
    const Point2 c{r * std::cos(th[2]), r * std::sin(th[2])};
    CHECK(std::abs(curvature_three_point(a, b, c)) == doctest::Approx(1.0 / r).epsilon(1e-9));
  }
}

TEST_CASE("log grid") {
  const auto g = log_grid(1e-3, 10.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 10.0);
  CHECK(g[1] == doctest::Approx(1e-2));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(10.0));
  CHECK(log_grid(2.0, 2.0, 3) == std::vector<double>(3, 2.0));
  CHECK(log_grid(1.0, 2.0, 0).empty());
}

TEST_CASE("corner on a coarse grid agrees with a dense scan") {
  const Triplet t = toy(12);
  const GenEig e = gen_eig(t);
  const auto [lo, hi] = lambda_range(e);
  const LambdaSelection coarse = select_lambda(t, RegularizerKind::L2rho, e);
  CHECK_FALSE(coarse.degenerate);
  CHECK(coarse.curve.lambdas.size() == 60);
  CHECK(coarse.curve.curvature.front() == 0.0);
  CHECK(coarse.curve.curvature.back() == 0.0);
  const LambdaSelection dense = select_lambda(t, RegularizerKind::L2rho, e, lo, hi, 10000);
  const double cell = std::log(hi / lo) / 59.0;
  CHECK(std::abs(std::log(coarse.lambda / dense.lambda)) <= cell);

  // doubling the resolution moves the corner by at most one coarse cell
  const LambdaSelection fine = select_lambda(t, RegularizerKind::L2rho, e, lo, hi, 119);
  CHECK(std::abs(std::log(coarse.lambda / fine.lambda)) <= cell);
}

TEST_CASE("every regularizer returns a lambda inside the range") {
  const Triplet t = toy(10);
  const GenEig e = gen_eig(t);
  const auto [lo, hi] = lambda_range(e);
  for (RegularizerKind k : {RegularizerKind::L2small, RegularizerKind::L2rho, RegularizerKind::RKHS}) {
    const LambdaSelection s = select_lambda(t, k, e);
    CHECK(s.lambda >= lo);
    CHECK(s.lambda <= hi);
  }
}

TEST_CASE("degenerate curves fall back to the lower end") {
  SUBCASE("zero data") {
    Triplet t = toy(8);
    t.b.setZero();
    t.Cf = 0.0;
    const GenEig e = gen_eig(t);
    const LambdaSelection s = select_lambda(t, RegularizerKind::RKHS, e);
    CHECK(s.degenerate);
    CHECK(s.lambda == lambda_range(e).first);
  }
  SUBCASE("single eigenvalue") {
    Triplet t;
    t.A = Eigen::MatrixXd::Identity(3, 3);
    t.B = t.A;
    t.b = Eigen::VectorXd::Ones(3);
    t.Cf = 5.0;
    const LambdaSelection s = select_lambda(t, RegularizerKind::L2small, gen_eig(t));
    CHECK(s.degenerate);
    CHECK(s.lambda == 1.0);
  }
  CHECK_THROWS_AS(select_lambda(toy(4), RegularizerKind::L2rho, gen_eig(toy(4)), 1.0, 0.5, 60), Error);
  CHECK_THROWS_AS(select_lambda(toy(4), RegularizerKind::L2rho, gen_eig(toy(4)), 0.1, 1.0, 3), Error);
}

TEST_CASE("corner index prefers the larger lambda on ties") {
  LCurve c;
  c.lambdas = {1, 2, 3, 4, 5};
  c.points.resize(5);
  c.curvature = {0.0, 0.5, 0.2, 0.5, 0.0};
  CHECK(corner_index(c) == 3);
  c.curvature = {0.0, 0.0, 0.0, 0.0, 0.0};
  bool degenerate = false;
  corner_index(c, &degenerate);
  CHECK(degenerate);
}
