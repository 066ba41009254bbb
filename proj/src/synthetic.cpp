#include "nlkl/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "nlkl/errors.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {

double synthetic_input(InputFamily family, std::size_t i, double x) {
  constexpr double pi = std::numbers::pi;
  if (x < -pi || x > pi) return 0.0;
  if (family == InputFamily::SinCos) {
    if (i > 1) throw Error(ErrorCode::InvalidArgument, "the sin/cos family has two inputs");
    return i == 0 ? std::sin(x) : std::cos(x);
  }
  const double freq = static_cast<double>(i / 2 + 1);
  return i % 2 == 0 ? std::sin(freq * x) : std::cos(freq * x);
}

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  if (!(spec.half_width > 0.0) || !(spec.dx > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "synthetic grid needs half_width > 0 and dx > 0");
  }
  const std::size_t N = spec.family == InputFamily::SinCos ? 2 : spec.pairs;
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "at least one data pair is required");
  const RadialKernel phi = make_true_kernel(spec.kernel);
  const UniformGrid grid = UniformGrid::spanning(-spec.half_width, spec.half_width, spec.dx);
  const double R0 = phi.support_radius();
  constexpr double pi = std::numbers::pi;
  const double cuts[] = {-pi, pi};

  std::vector<std::vector<double>> u(N, std::vector<double>(grid.count));
  std::vector<std::vector<double>> f(N, std::vector<double>(grid.count, 0.0));
  parallel_for(grid.count, [&](std::size_t j) {
    const double x = grid.node(j);
    for (std::size_t i = 0; i < N; ++i) u[i][j] = synthetic_input(spec.family, i, x);
    // Far from [-pi, pi] both u(x) and u(y) vanish on the whole window.
    if (x - R0 > pi || x + R0 < -pi) return;
    for (std::size_t i = 0; i < N; ++i) {
      auto ui = [&](double y) { return synthetic_input(spec.family, i, y); };
      f[i][j] = apply_quadrature(phi, ui, x, spec.tol, cuts);
    }
  });

  std::vector<DataPair> pairs;
  pairs.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    pairs.emplace_back(SampledFunction(grid, std::move(u[i])), SampledFunction(grid, std::move(f[i])));
  }
  return Dataset(std::move(pairs));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace nlkl
