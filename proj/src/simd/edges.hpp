#pragma once

// Boundary handling shared by every kernel variant. Only the interior range,
// where both u(j + s) and u(j - s) lie on the grid, is vectorized; the edge
// nodes always go through these scalar helpers.

#include <cstddef>

#include "nlkl/simd/kernels.hpp"

namespace nlkl::simd::detail {

struct Range {
  std::size_t lo;
  std::size_t hi;  // exclusive; lo >= hi means empty
};

/// Nodes j with s <= j < n - s.
inline Range interior(std::size_t n, std::size_t s) {
  if (n <= 2 * s) return {0, 0};
  return {s, n - s};
}

inline double second_difference_at(const double* u, std::size_t n, std::size_t s,
                                   std::size_t j, BoundaryRule rule) {
  const bool has_up = j + s < n;
  const bool has_down = j >= s;
  switch (rule) {
    case BoundaryRule::ZeroExtension: {
      const double up = has_up ? u[j + s] : 0.0;
      const double down = has_down ? u[j - s] : 0.0;
      return (up + down) - 2.0 * u[j];
    }
    case BoundaryRule::Periodic: {
      const std::size_t sm = s % n;
      const double up = u[(j + sm) % n];
      const double down = u[(j + n - sm) % n];
      return (up + down) - 2.0 * u[j];
    }
    case BoundaryRule::InGridOnly: {
      if (has_up && has_down) return (u[j + s] + u[j - s]) - 2.0 * u[j];
      double v = 0.0;
      if (has_up) v += u[j + s] - u[j];
      if (has_down) v += u[j - s] - u[j];
      return v;
    }
  }
  return 0.0;
}

template <class Fn>
inline void for_each_edge(std::size_t n, std::size_t s, Fn&& fn) {
  const Range in = interior(n, s);
  if (in.lo >= in.hi) {
    for (std::size_t j = 0; j < n; ++j) fn(j);
    return;
  }
  for (std::size_t j = 0; j < in.lo; ++j) fn(j);
  for (std::size_t j = in.hi; j < n; ++j) fn(j);
}

/// Split point for pairwise summation; keeps the left half a multiple of
/// `align` so vector bodies see aligned-length blocks.
inline std::size_t pairwise_split(std::size_t n, std::size_t align) {
  std::size_t h = n / 2;
  h -= h % align;
  return h == 0 ? align : h;
}

}  // namespace nlkl::simd::detail
