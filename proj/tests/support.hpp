#pragma once

// Small random instances shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nlkl/grid.hpp"

namespace testing_support {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline nlkl::SampledFunction random_function(std::mt19937_64& rng, const nlkl::UniformGrid& g) {
  return nlkl::SampledFunction(g, random_vector(rng, g.count));
}

/// N pairs of random u on a J-node grid; f is filled with independent noise.
inline nlkl::Dataset random_dataset(std::mt19937_64& rng, std::size_t J, std::size_t N,
                                    double dx = 0.1) {
  const auto g = nlkl::UniformGrid::make(0.0, dx, J);
  std::vector<nlkl::DataPair> pairs;
  for (std::size_t i = 0; i < N; ++i) pairs.emplace_back(random_function(rng, g), random_function(rng, g));
  return nlkl::Dataset(std::move(pairs));
}

inline double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

}  // namespace testing_support
