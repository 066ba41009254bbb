#include "nlkl/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlkl/errors.hpp"

namespace nlkl {

UniformGrid UniformGrid::make(double x0, double dx, std::size_t count) {
  if (!std::isfinite(x0) || !std::isfinite(dx) || !(dx > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacing must be finite and positive");
  }
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two nodes");
  return UniformGrid{x0, dx, count};
}

UniformGrid UniformGrid::spanning(double lo, double hi, double dx) {
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "empty grid interval");
  const double cells = std::floor((hi - lo) / dx + 1e-3);
  return make(lo, dx, static_cast<std::size_t>(cells) + 1);
}

SampledFunction::SampledFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.count) {
    throw Error(ErrorCode::LengthMismatch, "sample count " + std::to_string(values_.size()) +
                                               " does not match grid count " +
                                               std::to_string(grid_.count));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite sample value");
  }
}

DataPair::DataPair(SampledFunction u_, SampledFunction f_, std::vector<std::uint8_t> mask)
    : u(std::move(u_)), f(std::move(f_)), observed(std::move(mask)) {
  if (!(u.grid() == f.grid())) throw Error(ErrorCode::LengthMismatch, "u and f grids differ");
  if (!observed.empty() && observed.size() != u.size()) {
    throw Error(ErrorCode::LengthMismatch, "observation mask length differs from grid");
  }
}

Dataset::Dataset(std::vector<DataPair> pairs) : pairs_(std::move(pairs)) {
  for (const DataPair& p : pairs_) {
    if (!(p.u.grid() == pairs_.front().u.grid())) {
      throw Error(ErrorCode::LengthMismatch, "dataset pairs do not share one grid");
    }
  }
}

const UniformGrid& Dataset::grid() const {
  if (pairs_.empty()) throw Error(ErrorCode::DegenerateData, "empty dataset");
  return pairs_.front().u.grid();
}

GaussianStream::GaussianStream(std::uint64_t seed) : engine_(seed) {}

double GaussianStream::uniform() {
  // 53 random bits mapped to (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double l2_norm(const SampledFunction& f) {
  const auto v = f.values();
  return std::sqrt(simd::active().dot(v.data(), v.data(), v.size()) * f.grid().dx);
}

Dataset add_noise(const Dataset& d, const NoiseSpec& spec) {
  if (!(spec.nsr >= 0.0)) throw Error(ErrorCode::InvalidArgument, "nsr must be >= 0");
  if (spec.nsr == 0.0 || d.empty()) return d;
  double mean_norm = 0.0;
  for (const DataPair& p : d.pairs()) mean_norm += l2_norm(p.f);
  mean_norm /= static_cast<double>(d.size());
  const double sigma = spec.nsr * mean_norm;

  GaussianStream noise(spec.seed);
  std::vector<DataPair> out;
  out.reserve(d.size());
  for (const DataPair& p : d.pairs()) {
    std::vector<double> f(p.f.values().begin(), p.f.values().end());
    for (double& v : f) v += sigma * noise.next();
    out.emplace_back(p.u, SampledFunction(p.f.grid(), std::move(f)), p.observed);
  }
  return Dataset(std::move(out));
}

std::pair<double, double> support_bounds(const SampledFunction& f, double threshold) {
  return support_bounds(f, threshold, {});
}

std::pair<double, double> support_bounds(const SampledFunction& f, double threshold,
                                         std::span<const std::uint8_t> mask) {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be >= 0");
  const auto v = f.values();
  std::size_t first = v.size();
  std::size_t last = 0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!mask.empty() && mask[j] == 0) continue;
    if (std::fabs(v[j]) > threshold) {
      if (first == v.size()) first = j;
      last = j;
    }
  }
  if (first == v.size()) throw Error(ErrorCode::EmptySupport, "no value above threshold");
  return {f.grid().node(first), f.grid().node(last)};
}

}  // namespace nlkl
