#pragma once

// Synthetic data: truncated trigonometric inputs and their images under a
// known kernel, computed by adaptive quadrature.

#include <cstddef>
#include <cstdint>

#include "nlkl/grid.hpp"
#include "nlkl/operator.hpp"

namespace nlkl {

enum class InputFamily {
  SinCos,   ///< u1 = sin(x) 1_[-pi,pi], u2 = cos(x) 1_[-pi,pi]
  Harmonics ///< sin(x), cos(x), sin(2x), cos(2x), ... truncated to [-pi,pi]
};

struct SyntheticSpec {
  TrueKernelSpec kernel;
  double half_width = 40.0;   ///< grid on [-half_width, half_width]
  double dx = 0.025;
  InputFamily family = InputFamily::SinCos;
  std::size_t pairs = 2;      ///< used by Harmonics
  double tol = 1e-10;         ///< absolute quadrature tolerance per node
};

/// The i-th input (0-based) of a family, as a function on the real line.
double synthetic_input(InputFamily family, std::size_t i, double x);

/// Noiseless pairs (u_i, L_phi[u_i]) on the grid; f from adaptive quadrature
/// with panel breaks at +-pi and at the kernel breakpoints.
Dataset make_synthetic_dataset(const SyntheticSpec& spec);

/// Stateless 64-bit mixer for deriving independent seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nlkl
