#include "nlkl/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define NLKL_HAVE_AVX2_VARIANT 1
#include <immintrin.h>

#include <cmath>

#include "edges.hpp"
#endif

namespace nlkl::simd {

#if NLKL_HAVE_AVX2_VARIANT
namespace {

#define NLKL_AVX2 __attribute__((target("avx2,fma")))

constexpr std::size_t kBlock = 256;

NLKL_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

NLKL_AVX2 double dot_block(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  __m256d a3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
  }
  for (; i + 4 <= n; i += 4) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

NLKL_AVX2 double dot(const double* x, const double* y, std::size_t n) {
  if (n <= kBlock) return dot_block(x, y, n);
  const std::size_t h = detail::pairwise_split(n, 16);
  return dot(x, y, h) + dot(x + h, y + h, n - h);
}

NLKL_AVX2 double abs_diff_block(const double* u, std::size_t s, std::size_t count) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= count; j += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(u + j + s), _mm256_loadu_pd(u + j));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(u + j + s + 4), _mm256_loadu_pd(u + j + 4));
    a0 = _mm256_add_pd(a0, _mm256_andnot_pd(sign, d0));
    a1 = _mm256_add_pd(a1, _mm256_andnot_pd(sign, d1));
  }
  for (; j + 4 <= count; j += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(u + j + s), _mm256_loadu_pd(u + j));
    a0 = _mm256_add_pd(a0, _mm256_andnot_pd(sign, d0));
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; j < count; ++j) acc += std::fabs(u[j + s] - u[j]);
  return acc;
}

NLKL_AVX2 double abs_diff_pairwise(const double* u, std::size_t s, std::size_t count) {
  if (count <= kBlock) return abs_diff_block(u, s, count);
  const std::size_t h = detail::pairwise_split(count, 16);
  return abs_diff_pairwise(u, s, h) + abs_diff_pairwise(u + h, s, count - h);
}

NLKL_AVX2 double abs_diff_sum(const double* u, std::size_t n, std::size_t shift) {
  if (shift >= n) return 0.0;
  return abs_diff_pairwise(u, shift, n - shift);
}

NLKL_AVX2 void second_difference(const double* u, std::size_t n, std::size_t s,
                                 BoundaryRule rule, double* out) {
  const detail::Range in = detail::interior(n, s);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t j = in.lo;
  for (; j + 4 <= in.hi; j += 4) {
    const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(u + j + s), _mm256_loadu_pd(u + j - s));
    _mm256_storeu_pd(out + j, _mm256_sub_pd(sum, _mm256_mul_pd(two, _mm256_loadu_pd(u + j))));
  }
  for (; j < in.hi; ++j) out[j] = (u[j + s] + u[j - s]) - 2.0 * u[j];
  detail::for_each_edge(n, s, [&](std::size_t k) {
    out[k] = detail::second_difference_at(u, n, s, k, rule);
  });
}

NLKL_AVX2 void accumulate_nonlocal(const double* u, std::size_t n, std::size_t s, double w,
                                   BoundaryRule rule, double* out) {
  const detail::Range in = detail::interior(n, s);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t j = in.lo;
  for (; j + 4 <= in.hi; j += 4) {
    const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(u + j + s), _mm256_loadu_pd(u + j - s));
    const __m256d d = _mm256_sub_pd(sum, _mm256_mul_pd(two, _mm256_loadu_pd(u + j)));
    _mm256_storeu_pd(out + j, _mm256_fmadd_pd(wv, d, _mm256_loadu_pd(out + j)));
  }
  for (; j < in.hi; ++j) out[j] += w * ((u[j + s] + u[j - s]) - 2.0 * u[j]);
  detail::for_each_edge(n, s, [&](std::size_t k) {
    out[k] += w * detail::second_difference_at(u, n, s, k, rule);
  });
}

NLKL_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

#undef NLKL_AVX2

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{"avx2", dot, abs_diff_sum, second_difference,
                                 accumulate_nonlocal, axpy};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace nlkl::simd
