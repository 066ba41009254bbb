#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nlkl/errors.hpp"
#include "nlkl/grid.hpp"
#include "support.hpp"

using namespace nlkl;

TEST_CASE("grid construction") {
  const auto g = UniformGrid::make(-1.0, 0.5, 5);
  CHECK(g.node(0) == -1.0);
  CHECK(g.right() == doctest::Approx(1.0));
  CHECK_THROWS_AS(UniformGrid::make(0.0, 0.0, 5), Error);
  CHECK_THROWS_AS(UniformGrid::make(0.0, 0.1, 1), Error);

  const auto s = UniformGrid::spanning(-40.0, 40.0, 0.0125);
  CHECK(s.count == 6401);
  CHECK(s.right() == doctest::Approx(40.0));
}

TEST_CASE("sampled functions reject mismatched lengths and non-finite values") {
  const auto g = UniformGrid::make(0.0, 1.0, 3);
  CHECK_THROWS_AS(SampledFunction(g, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(SampledFunction(g, {1.0, NAN, 2.0}), Error);
}

TEST_CASE("datasets require one shared grid") {
  const auto g1 = UniformGrid::make(0.0, 1.0, 3);
  const auto g2 = UniformGrid::make(0.0, 0.5, 3);
  const SampledFunction a(g1, {0, 1, 0});
  const SampledFunction b(g2, {0, 1, 0});
  CHECK_THROWS_AS(DataPair(a, b), Error);
  std::vector<DataPair> pairs{DataPair(a, a), DataPair(b, b)};
  CHECK_THROWS_AS(Dataset(std::move(pairs)), Error);
}

TEST_CASE("l2 norm") {
  const auto g = UniformGrid::make(0.0, 0.25, 5);
  CHECK(l2_norm(SampledFunction(g, {0, 0, 0, 0, 0})) == 0.0);
  CHECK(l2_norm(SampledFunction(g, {1, 1, 1, 1, 1})) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));

  const auto fine = UniformGrid::spanning(-std::numbers::pi, std::numbers::pi, 1e-3);
  const auto s = SampledFunction::sample(fine, [](double x) { return std::sin(x); });
  CHECK(std::abs(l2_norm(s) - std::sqrt(std::numbers::pi)) < 1e-3);
}

TEST_CASE("l2 norm is absolutely homogeneous") {
  std::mt19937_64 rng(5);
  const auto g = UniformGrid::make(0.0, 0.1, 200);
  for (int t = 0; t < 20; ++t) {
    const auto f = testing_support::random_function(rng, g);
    const double c = std::uniform_real_distribution<double>(-5, 5)(rng);
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x *= c;
    CHECK(l2_norm(SampledFunction(g, v)) == doctest::Approx(std::abs(c) * l2_norm(f)).epsilon(1e-14));
  }
}

TEST_CASE("noise") {
  const auto g = UniformGrid::make(0.0, 1e-5, 200000);
  // l2 norm 2 on this grid: constant value 2 / sqrt(count dx)
  const double level = 2.0 / std::sqrt(2.0);
  std::vector<double> f(g.count, level);
  const Dataset d({DataPair(SampledFunction(g, std::vector<double>(g.count, 0.0)), SampledFunction(g, f))});
  REQUIRE(l2_norm(d.pairs()[0].f) == doctest::Approx(2.0));

  SUBCASE("nsr 0 is the identity") {
    const Dataset same = add_noise(d, {0.0, 9});
    const auto v = same.pairs()[0].f.values();
    CHECK(std::equal(v.begin(), v.end(), f.begin()));
  }
  SUBCASE("sample standard deviation matches sigma") {
    const Dataset noisy = add_noise(d, {1.0, 9});
    double m = 0.0, v = 0.0;
    for (std::size_t j = 0; j < g.count; ++j) m += noisy.pairs()[0].f[j] - level;
    m /= static_cast<double>(g.count);
    for (std::size_t j = 0; j < g.count; ++j) {
      const double e = noisy.pairs()[0].f[j] - level - m;
      v += e * e;
    }
    const double sd = std::sqrt(v / static_cast<double>(g.count - 1));
    CHECK(std::abs(sd - 2.0) < 0.1);
    for (std::size_t j = 0; j < g.count; j += 997) CHECK(noisy.pairs()[0].u[j] == 0.0);
  }
  SUBCASE("fixed seed is bit-reproducible") {
    const Dataset a = add_noise(d, {0.5, 42});
    const Dataset b = add_noise(d, {0.5, 42});
    const Dataset c = add_noise(d, {0.5, 43});
    const auto va = a.pairs()[0].f.values();
    const auto vb = b.pairs()[0].f.values();
    const auto vc = c.pairs()[0].f.values();
    CHECK(std::equal(va.begin(), va.end(), vb.begin()));
    CHECK_FALSE(std::equal(va.begin(), va.end(), vc.begin()));
  }
}

TEST_CASE("gaussian stream moments") {
  GaussianStream s(1);
  const int n = 400000;
  double m = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.next();
    m += z;
    m2 += z * z;
  }
  CHECK(std::abs(m / n) < 0.01);
  CHECK(std::abs(m2 / n - 1.0) < 0.01);
}

TEST_CASE("support bounds") {
  const auto g = UniformGrid::make(0.0, 0.1, 11);
  CHECK_THROWS_AS(support_bounds(SampledFunction(g, std::vector<double>(11, 0.0)), 1e-8), Error);

  std::vector<double> ind(11, 0.0);
  for (int j = 3; j <= 7; ++j) ind[j] = 1.0;
  const auto [lo, hi] = support_bounds(SampledFunction(g, ind), 1e-8);
  CHECK(lo == doctest::Approx(0.3));
  CHECK(hi == doctest::Approx(0.7));

  std::vector<std::uint8_t> mask(11, 1);
  mask[3] = 0;
  const auto [mlo, mhi] = support_bounds(SampledFunction(g, ind), 1e-8, mask);
  CHECK(mlo == doctest::Approx(0.4));
  CHECK(mhi == doctest::Approx(0.7));

  const auto wide = UniformGrid::spanning(-40.0, 40.0, 0.0125);
  const auto gauss = SampledFunction::sample(wide, [](double x) { return std::exp(-x * x); });
  const auto [a, b] = support_bounds(gauss, 1e-8);
  const double L = std::sqrt(std::log(1e8));
  CHECK(std::abs(b - L) <= 0.0125);
  CHECK(std::abs(a + L) <= 0.0125);
}

TEST_CASE("support bounds are monotone in the threshold") {
  std::mt19937_64 rng(11);
  const auto g = UniformGrid::make(-5.0, 0.05, 201);
  for (int t = 0; t < 30; ++t) {
    const auto f = testing_support::random_function(rng, g);
    double prev_lo = -INFINITY, prev_hi = INFINITY;
    for (double th : {0.0, 0.1, 0.3, 0.6, 0.9}) {
      const auto [lo, hi] = support_bounds(f, th);
      CHECK(lo >= prev_lo);
      CHECK(hi <= prev_hi);
      prev_lo = lo;
      prev_hi = hi;
    }
  }
}
