#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "nlkl/errors.hpp"
#include "nlkl/explore.hpp"
#include "support.hpp"

using namespace nlkl;

namespace {

// Direct enumeration of ordered node pairs (j, l), j != l, |j - l| dx <= cap.
std::vector<double> brute_force_measure(const Dataset& d, double cap, double* mass) {
  const UniformGrid& g = d.grid();
  const auto K = static_cast<std::size_t>(std::floor(cap / g.dx + 1e-9));
  std::vector<double> w(K, 0.0);
  for (const DataPair& p : d.pairs()) {
    for (std::size_t j = 0; j < g.count; ++j) {
      for (std::size_t l = 0; l < g.count; ++l) {
        const std::size_t k = j > l ? j - l : l - j;
        if (k == 0 || k > K) continue;
        w[k - 1] += std::abs(p.u[j] - p.u[l]);
      }
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  *mass = total;
  return w;
}

Dataset single(const std::vector<double>& u, double dx = 1.0) {
  const auto g = UniformGrid::make(0.0, dx, u.size());
  return Dataset({DataPair(SampledFunction(g, u), SampledFunction(g, u))});
}

}  // namespace

TEST_CASE("hand enumerated measure") {
  const ExplorationMeasure m = exploration_measure(single({0.0, 1.0, 0.0}), 2.0);
  REQUIRE(m.size() == 2);
  CHECK(m.weight(1) == 1.0);
  CHECK(m.weight(2) == 0.0);
  CHECK(m.raw_mass == 4.0);
  CHECK(m.r(2) == 2.0);
}

TEST_CASE("constant inputs are degenerate") {
  CHECK_THROWS_AS(exploration_measure(single({2.0, 2.0, 2.0, 2.0}), 2.0), Error);
  try {
    exploration_measure(single({1.0, 1.0, 1.0}), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateData);
  }
}

TEST_CASE("measure matches the brute-force enumeration") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const std::size_t J = 5 + rng() % 60;
    const std::size_t N = 1 + rng() % 3;
    const Dataset d = testing_support::random_dataset(rng, J, N, 0.1);
    const double cap = 0.1 * static_cast<double>(1 + rng() % (J - 1));
    double mass = 0.0;
    const auto w = brute_force_measure(d, cap, &mass);
    const ExplorationMeasure m = exploration_measure(d, cap);
    REQUIRE(m.size() == w.size());
    CHECK(testing_support::rel_diff(m.raw_mass, mass) < 1e-12);
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(std::abs(m.weights[k] - w[k]) <= 1e-12);
  }
}

TEST_CASE("measure of a truncated sine reaches past the support of u") {
  // |u(x + r) - u(x)| = |u(x)| whenever x + r leaves [-pi, pi], so rho is not
  // confined to r <= 2 pi.
  const auto g = UniformGrid::spanning(-10.0, 10.0, 0.1);
  const auto u = SampledFunction::sample(g, [](double x) { return std::abs(x) <= std::numbers::pi ? std::sin(x) : 0.0; });
  const Dataset d({DataPair(u, u)});
  double mass = 0.0;
  const auto w = brute_force_measure(d, 10.0, &mass);
  const ExplorationMeasure m = exploration_measure(d, 10.0);
  for (std::size_t k = 0; k < w.size(); ++k) CHECK(std::abs(m.weights[k] - w[k]) <= 1e-12);
  CHECK(m.weight(80) > 0.0);
}

TEST_CASE("measure is invariant under reordering the pairs") {
  std::mt19937_64 rng(37);
  const Dataset d = testing_support::random_dataset(rng, 200, 5, 0.05);
  std::vector<DataPair> rev(d.pairs().rbegin(), d.pairs().rend());
  std::vector<DataPair> rot(d.pairs().begin() + 2, d.pairs().end());
  rot.insert(rot.end(), d.pairs().begin(), d.pairs().begin() + 2);
  const ExplorationMeasure a = exploration_measure(d, 4.0);
  const ExplorationMeasure b = exploration_measure(Dataset(rev), 4.0);
  const ExplorationMeasure c = exploration_measure(Dataset(rot), 4.0);
  CHECK(a.weights == b.weights);
  CHECK(a.weights == c.weights);
  CHECK(a.raw_mass == b.raw_mass);
}

TEST_CASE("scale covariance") {
  std::mt19937_64 rng(41);
  const Dataset d = testing_support::random_dataset(rng, 100, 2, 0.1);
  const double c = -2.5;
  std::vector<DataPair> scaled;
  for (const DataPair& p : d.pairs()) {
    std::vector<double> v(p.u.values().begin(), p.u.values().end());
    for (double& x : v) x *= c;
    scaled.emplace_back(SampledFunction(p.u.grid(), v), p.f);
  }
  const ExplorationMeasure a = exploration_measure(d, 5.0);
  const ExplorationMeasure b = exploration_measure(Dataset(scaled), 5.0);
  CHECK(testing_support::rel_diff(b.raw_mass, std::abs(c) * a.raw_mass) < 1e-13);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a.weights[k] - b.weights[k]) <= 1e-15);
}

TEST_CASE("normalization and truncation") {
  std::mt19937_64 rng(43);
  const Dataset d = testing_support::random_dataset(rng, 150, 3, 0.1);
  const ExplorationMeasure m = exploration_measure(d);
  CHECK(m.truncated_to == doctest::Approx(7.4));
  double total = 0.0;
  for (double w : m.weights) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);

  const ExplorationMeasure t = m.truncated(2.05);
  CHECK(t.size() == 20);
  CHECK(t.truncated_to == 2.05);
  total = 0.0;
  for (double w : t.weights) total += w;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(t.weights[3] / t.weights[4] == doctest::Approx(m.weights[3] / m.weights[4]).epsilon(1e-14));

  const ExplorationMeasure wide = m.truncated(20.0);
  CHECK(wide.size() == 200);
  CHECK(wide.weights.back() == 0.0);
  CHECK(wide.support_radius() == doctest::Approx(7.4));

  const ExplorationMeasure tip = exploration_measure(single({0.0, 1.0, 1.0, 1.0}), 3.0);
  CHECK_THROWS_AS(tip.truncated(0.05), Error);
}

TEST_CASE("support estimate") {
  const auto g = UniformGrid::make(0.0, 0.1, 41);
  std::vector<double> u(41, 0.0), f(41, 0.0);
  for (int j = 10; j <= 20; ++j) u[j] = 1.0;
  for (int j = 7; j <= 25; ++j) f[j] = 0.5;
  const Dataset d({DataPair(SampledFunction(g, u), SampledFunction(g, f))});
  const ExplorationMeasure rho = exploration_measure(d);
  const SupportEstimate s = estimate_support(d, rho);
  REQUIRE(s.per_pair_ranges.size() == 2);
  CHECK(s.per_pair_ranges[0] == doctest::Approx(0.3));
  CHECK(s.per_pair_ranges[1] == doctest::Approx(0.5));
  CHECK(s.R == doctest::Approx(1.1 * std::min(0.5, s.R_rho)));
  CHECK(s.R <= 1.1 * s.R_rho);

  // a tight prior cap limits R through R_rho
  const ExplorationMeasure tight = exploration_measure(d, 0.2);
  CHECK(estimate_support(d, tight).R == doctest::Approx(1.1 * 0.2));

  // unobserved nodes do not widen the support of f
  std::vector<std::uint8_t> mask(41, 1);
  for (int j = 7; j < 10; ++j) mask[j] = 0;
  const Dataset masked({DataPair(SampledFunction(g, u), SampledFunction(g, f), mask)});
  CHECK(estimate_support(masked, rho).per_pair_ranges[0] == doctest::Approx(0.0));

  const Dataset same({DataPair(SampledFunction(g, u), SampledFunction(g, u))});
  try {
    estimate_support(same, exploration_measure(same));
    FAIL("expected DegenerateSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSupport);
  }
  const Dataset silent({DataPair(SampledFunction(g, u), SampledFunction(g, std::vector<double>(41, 0.0)))});
  CHECK_THROWS_AS(estimate_support(silent, rho), Error);
}
