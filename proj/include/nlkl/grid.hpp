#pragma once

// Uniform 1-D grids, sampled functions and function-pair datasets.
//
// All spatial integrals use the uniform Riemann rule: every node carries
// weight dx.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "nlkl/simd/kernels.hpp"

namespace nlkl {

struct UniformGrid {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t count = 2;

  /// Validating constructor: dx > 0, count >= 2, finite x0.
  static UniformGrid make(double x0, double dx, std::size_t count);

  /// Nodes lo, lo + dx, ... up to hi (inclusive, within dx/1000).
  static UniformGrid spanning(double lo, double hi, double dx);

  double node(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
  double right() const { return node(count - 1); }

  bool operator==(const UniformGrid&) const = default;
};

class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(UniformGrid grid, std::vector<double> values);

  template <class Fn>
  static SampledFunction sample(const UniformGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) v[j] = fn(grid.node(j));
    return SampledFunction(grid, std::move(v));
  }

  const UniformGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }

 private:
  UniformGrid grid_;
  std::vector<double> values_;
};

/// One (u, f) observation. `observed` optionally marks the nodes where f is a
/// measurement of L[u]; an empty mask means every node is observed. Unobserved
/// nodes (e.g. boundary nodes driven by a prescribed velocity) are excluded
/// from every spatial integral of the loss.
struct DataPair {
  SampledFunction u;
  SampledFunction f;
  std::vector<std::uint8_t> observed;

  DataPair(SampledFunction u, SampledFunction f, std::vector<std::uint8_t> observed = {});

  bool is_observed(std::size_t j) const { return observed.empty() || observed[j] != 0; }
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<DataPair> pairs);

  const std::vector<DataPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const UniformGrid& grid() const;

 private:
  std::vector<DataPair> pairs_;
};

struct NoiseSpec {
  double nsr = 0.0;
  std::uint64_t seed = 0;
};

/// Seedable N(0,1) stream: std::mt19937_64 words mapped to (0,1] uniforms
/// and transformed by Box-Muller, so draws are reproducible across standard
/// libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();

 private:
  double uniform();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// sqrt(sum_j f_j^2 dx).
double l2_norm(const SampledFunction& f);

/// f + N(0, sigma^2) at every node, sigma = nsr * mean_i l2_norm(f_i).
Dataset add_noise(const Dataset& d, const NoiseSpec& spec);

/// Positions of the first and last node with |f| > threshold.
/// Throws EmptySupport when there is none.
std::pair<double, double> support_bounds(const SampledFunction& f, double threshold);

/// Same, restricted to nodes where mask is nonzero (empty mask = all).
std::pair<double, double> support_bounds(const SampledFunction& f, double threshold,
                                         std::span<const std::uint8_t> mask);

}  // namespace nlkl
