#include <cmath>

#include "edges.hpp"
#include "nlkl/simd/kernels.hpp"

namespace nlkl::simd {
namespace {

constexpr std::size_t kBlock = 32;

double dot(const double* x, const double* y, std::size_t n) {
  if (n <= kBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  }
  const std::size_t h = detail::pairwise_split(n, 16);
  return dot(x, y, h) + dot(x + h, y + h, n - h);
}

// Pairwise over j in [0, count) of |u[j + s] - u[j]|.
double abs_diff_block(const double* u, std::size_t s, std::size_t count) {
  if (count <= kBlock) {
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) acc += std::fabs(u[j + s] - u[j]);
    return acc;
  }
  const std::size_t h = detail::pairwise_split(count, 16);
  return abs_diff_block(u, s, h) + abs_diff_block(u + h, s, count - h);
}

double abs_diff_sum(const double* u, std::size_t n, std::size_t shift) {
  if (shift >= n) return 0.0;
  return abs_diff_block(u, shift, n - shift);
}

void second_difference(const double* u, std::size_t n, std::size_t s, BoundaryRule rule,
                       double* out) {
  const detail::Range in = detail::interior(n, s);
  for (std::size_t j = in.lo; j < in.hi; ++j) out[j] = (u[j + s] + u[j - s]) - 2.0 * u[j];
  detail::for_each_edge(n, s, [&](std::size_t j) {
    out[j] = detail::second_difference_at(u, n, s, j, rule);
  });
}

void accumulate_nonlocal(const double* u, std::size_t n, std::size_t s, double w,
                         BoundaryRule rule, double* out) {
  const detail::Range in = detail::interior(n, s);
  for (std::size_t j = in.lo; j < in.hi; ++j) out[j] += w * ((u[j + s] + u[j - s]) - 2.0 * u[j]);
  detail::for_each_edge(n, s, [&](std::size_t j) {
    out[j] += w * detail::second_difference_at(u, n, s, j, rule);
  });
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", dot, abs_diff_sum, second_difference,
                                 accumulate_nonlocal, axpy};
  return table;
}

}  // namespace nlkl::simd
