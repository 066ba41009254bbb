#pragma once

// The nonlocal diffusion operator L_phi[u](x) = int phi(|y - x|) (u(y) - u(x)) dy
// and the reference kernels used by the synthetic experiments.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nlkl/grid.hpp"

namespace nlkl {

class RadialKernel {
 public:
  RadialKernel() = default;

  /// `breakpoints` lists radii where phi is discontinuous or kinked; the
  /// quadrature splits panels there.
  RadialKernel(std::function<double(double)> fn, double support_radius,
               std::vector<double> breakpoints = {}, std::string name = {});

  /// phi(r); zero for r > support_radius.
  double operator()(double r) const;

  double support_radius() const { return support_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::string& name() const { return name_; }

  /// phi(k dx) for k = 1..floor(support/dx).
  std::vector<double> tabulate(double dx) const;

 private:
  std::function<double(double)> fn_;
  double support_ = 0.0;
  std::vector<double> breakpoints_;
  std::string name_;
};

enum class TrueKernelKind { Sine, Gaussian, FractionalLaplacian };

std::string to_string(TrueKernelKind kind);
TrueKernelKind true_kernel_kind_from_string(const std::string& name);

struct TrueKernelSpec {
  TrueKernelKind kind = TrueKernelKind::Sine;
  // Sine: sin(frequency r) on [0, cutoff].
  double frequency = 6.0;
  double cutoff = 10.0;
  // Gaussian density N(center, sd^2), truncated at center + 8 sd.
  double center = 5.0;
  double sd = 1.0;
  // Fractional Laplacian: |c_{d,s}| r^{-(d+2s)} on [inner, outer], 10^{d+2s} on [0, inner).
  double exponent = 0.5;
  int dimension = 1;
  double inner = 0.1;
  double outer = 6.0;
};

/// |4^s pi^{-d/2} Gamma(d/2 + s) Gamma(-s)|.
double fractional_constant(double s, int d);

/// Throws InvalidSpec for s outside (0, 1) or d != 1.
RadialKernel make_true_kernel(const TrueKernelSpec& spec);

/// Number of radial bins k dx, k >= 1, inside [0, radius].
std::size_t bins_within(double radius, double dx);

/// Riemann rule: g_j = sum_k phi(k dx) D(j, k) dx, where D is the shifted
/// second difference extended by `rule`.
SampledFunction apply_riemann(const RadialKernel& phi, const SampledFunction& u,
                              BoundaryRule rule = BoundaryRule::ZeroExtension);

/// Same with phi tabulated on bins: phi_bins[k - 1] = phi(k dx).
SampledFunction apply_riemann(std::span<const double> phi_bins, const SampledFunction& u,
                              BoundaryRule rule = BoundaryRule::ZeroExtension);

/// int_{x - R0}^{x + R0} phi(|y - x|) (u(y) - u(x)) dy to absolute accuracy tol.
/// `u_breakpoints` are discontinuities of u (e.g. truncation points).
double apply_quadrature(const RadialKernel& phi, const std::function<double(double)>& u, double x,
                        double tol, std::span<const double> u_breakpoints = {});

}  // namespace nlkl
