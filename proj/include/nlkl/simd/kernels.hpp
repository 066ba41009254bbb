#pragma once

// Data-parallel inner loops of the nonlocal learning pipeline.
//
// Every kernel has a scalar reference implementation and optional vector
// variants (AVX2+FMA on x86-64, NEON on AArch64). The active table is picked
// once per process from CPU features; NLKL_SIMD=scalar|avx2|neon|auto in the
// environment overrides the choice. Vector variants reassociate sums, so they
// agree with the scalar reference to rounding, not bitwise.

#include <cstddef>
#include <string_view>

namespace nlkl {

/// How u is extended outside the sampled grid when forming u(x +- r).
enum class BoundaryRule {
  ZeroExtension,  ///< u = 0 outside the grid
  InGridOnly,     ///< out-of-grid neighbours are dropped from the sum
  Periodic,       ///< indices wrap modulo the node count
};

std::string_view to_string(BoundaryRule rule);
BoundaryRule boundary_rule_from_string(std::string_view name);

namespace simd {

struct KernelTable {
  const char* name;

  /// sum_j x[j] * y[j], pairwise-blocked accumulation.
  double (*dot)(const double* x, const double* y, std::size_t n);

  /// sum_j |u[j + shift] - u[j]| over 0 <= j < n - shift.
  double (*abs_diff_sum)(const double* u, std::size_t n, std::size_t shift);

  /// out[j] = u(j + shift) + u(j - shift) - 2 u(j), extended per rule.
  /// For InGridOnly the missing side contributes nothing:
  /// out[j] = [j+s in grid](u[j+s] - u[j]) + [j-s in grid](u[j-s] - u[j]).
  void (*second_difference)(const double* u, std::size_t n, std::size_t shift,
                            BoundaryRule rule, double* out);

  /// out[j] += weight * second_difference(u, shift)[j].
  void (*accumulate_nonlocal)(const double* u, std::size_t n, std::size_t shift,
                              double weight, BoundaryRule rule, double* out);

  /// y += a * x.
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant is not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Table used by the library. Resolved on first call.
const KernelTable& active();

/// Force a table by name ("scalar", "avx2", "neon", "auto"). Returns false if
/// the requested variant is unavailable; the active table is then unchanged.
bool select(std::string_view name);

}  // namespace simd
}  // namespace nlkl
