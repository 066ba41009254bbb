#include "nlkl/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define NLKL_HAVE_NEON_VARIANT 1
#include <arm_neon.h>

#include <cmath>

#include "edges.hpp"
#endif

namespace nlkl::simd {

#if NLKL_HAVE_NEON_VARIANT
namespace {

constexpr std::size_t kBlock = 256;

double dot_block(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  float64x2_t a2 = vdupq_n_f64(0.0);
  float64x2_t a3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    a2 = vfmaq_f64(a2, vld1q_f64(x + i + 4), vld1q_f64(y + i + 4));
    a3 = vfmaq_f64(a3, vld1q_f64(x + i + 6), vld1q_f64(y + i + 6));
  }
  for (; i + 2 <= n; i += 2) a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(vaddq_f64(vaddq_f64(a0, a1), vaddq_f64(a2, a3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  if (n <= kBlock) return dot_block(x, y, n);
  const std::size_t h = detail::pairwise_split(n, 16);
  return dot(x, y, h) + dot(x + h, y + h, n - h);
}

double abs_diff_block(const double* u, std::size_t s, std::size_t count) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    a0 = vaddq_f64(a0, vabdq_f64(vld1q_f64(u + j + s), vld1q_f64(u + j)));
    a1 = vaddq_f64(a1, vabdq_f64(vld1q_f64(u + j + s + 2), vld1q_f64(u + j + 2)));
  }
  double acc = vaddvq_f64(vaddq_f64(a0, a1));
  for (; j < count; ++j) acc += std::fabs(u[j + s] - u[j]);
  return acc;
}

double abs_diff_pairwise(const double* u, std::size_t s, std::size_t count) {
  if (count <= kBlock) return abs_diff_block(u, s, count);
  const std::size_t h = detail::pairwise_split(count, 16);
  return abs_diff_pairwise(u, s, h) + abs_diff_pairwise(u + h, s, count - h);
}

double abs_diff_sum(const double* u, std::size_t n, std::size_t shift) {
  if (shift >= n) return 0.0;
  return abs_diff_pairwise(u, shift, n - shift);
}

void second_difference(const double* u, std::size_t n, std::size_t s, BoundaryRule rule,
                       double* out) {
  const detail::Range in = detail::interior(n, s);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t j = in.lo;
  for (; j + 2 <= in.hi; j += 2) {
    const float64x2_t sum = vaddq_f64(vld1q_f64(u + j + s), vld1q_f64(u + j - s));
    vst1q_f64(out + j, vsubq_f64(sum, vmulq_f64(two, vld1q_f64(u + j))));
  }
  for (; j < in.hi; ++j) out[j] = (u[j + s] + u[j - s]) - 2.0 * u[j];
  detail::for_each_edge(n, s, [&](std::size_t k) {
    out[k] = detail::second_difference_at(u, n, s, k, rule);
  });
}

void accumulate_nonlocal(const double* u, std::size_t n, std::size_t s, double w,
                         BoundaryRule rule, double* out) {
  const detail::Range in = detail::interior(n, s);
  const float64x2_t two = vdupq_n_f64(2.0);
  const float64x2_t wv = vdupq_n_f64(w);
  std::size_t j = in.lo;
  for (; j + 2 <= in.hi; j += 2) {
    const float64x2_t sum = vaddq_f64(vld1q_f64(u + j + s), vld1q_f64(u + j - s));
    const float64x2_t d = vsubq_f64(sum, vmulq_f64(two, vld1q_f64(u + j)));
    vst1q_f64(out + j, vfmaq_f64(vld1q_f64(out + j), wv, d));
  }
  for (; j < in.hi; ++j) out[j] += w * ((u[j + s] + u[j - s]) - 2.0 * u[j]);
  detail::for_each_edge(n, s, [&](std::size_t k) {
    out[k] += w * detail::second_difference_at(u, n, s, k, rule);
  });
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{"neon", dot, abs_diff_sum, second_difference,
                                 accumulate_nonlocal, axpy};
  return &table;
}

#else

const KernelTable* neon_kernels() { return nullptr; }

#endif

}  // namespace nlkl::simd
