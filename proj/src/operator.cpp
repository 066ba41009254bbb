#include "nlkl/operator.hpp"

#include <cmath>
#include <numbers>

#include "nlkl/errors.hpp"
#include "nlkl/quadrature.hpp"

namespace nlkl {

RadialKernel::RadialKernel(std::function<double(double)> fn, double support_radius,
                           std::vector<double> breakpoints, std::string name)
    : fn_(std::move(fn)),
      support_(support_radius),
      breakpoints_(std::move(breakpoints)),
      name_(std::move(name)) {
  if (!(support_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "support radius must be > 0");
}

double RadialKernel::operator()(double r) const {
  if (r < 0.0 || r > support_ || !fn_) return 0.0;
  return fn_(r);
}

std::vector<double> RadialKernel::tabulate(double dx) const {
  const std::size_t K = bins_within(support_, dx);
  std::vector<double> out(K);
  for (std::size_t k = 1; k <= K; ++k) out[k - 1] = (*this)(static_cast<double>(k) * dx);
  return out;
}

std::string to_string(TrueKernelKind kind) {
  switch (kind) {
    case TrueKernelKind::Sine: return "sine";
    case TrueKernelKind::Gaussian: return "gaussian";
    case TrueKernelKind::FractionalLaplacian: return "fractional";
  }
  return "sine";
}

TrueKernelKind true_kernel_kind_from_string(const std::string& name) {
  if (name == "sine") return TrueKernelKind::Sine;
  if (name == "gaussian") return TrueKernelKind::Gaussian;
  if (name == "fractional") return TrueKernelKind::FractionalLaplacian;
  throw Error(ErrorCode::InvalidSpec, "unknown kernel kind '" + name + "'");
}

double fractional_constant(double s, int d) {
  const double dd = static_cast<double>(d);
  return std::fabs(std::pow(4.0, s) * std::pow(std::numbers::pi, -dd / 2.0) *
                   std::tgamma(dd / 2.0 + s) * std::tgamma(-s));
}

RadialKernel make_true_kernel(const TrueKernelSpec& spec) {
  switch (spec.kind) {
    case TrueKernelKind::Sine: {
      if (!(spec.cutoff > 0.0)) throw Error(ErrorCode::InvalidSpec, "sine cutoff must be > 0");
      const double w = spec.frequency;
      return RadialKernel([w](double r) { return std::sin(w * r); }, spec.cutoff, {spec.cutoff},
                          "sine");
    }
    case TrueKernelKind::Gaussian: {
      if (!(spec.sd > 0.0)) throw Error(ErrorCode::InvalidSpec, "gaussian sd must be > 0");
      const double mu = spec.center;
      const double sd = spec.sd;
      const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
      return RadialKernel(
          [=](double r) {
            const double z = (r - mu) / sd;
            return norm * std::exp(-0.5 * z * z);
          },
          mu + 8.0 * sd, {}, "gaussian");
    }
    case TrueKernelKind::FractionalLaplacian: {
      const double s = spec.exponent;
      if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidSpec, "fractional exponent s must lie in (0,1)");
      if (spec.dimension != 1) throw Error(ErrorCode::InvalidSpec, "only dimension d = 1 is supported");
      if (!(spec.inner > 0.0 && spec.outer > spec.inner)) {
        throw Error(ErrorCode::InvalidSpec, "fractional kernel needs 0 < inner < outer");
      }
      const double order = static_cast<double>(spec.dimension) + 2.0 * s;
      const double c = fractional_constant(s, spec.dimension);
      const double plateau = std::pow(10.0, order);
      const double inner = spec.inner;
      return RadialKernel(
          [=](double r) { return r < inner ? plateau : c * std::pow(r, -order); }, spec.outer,
          {spec.inner, spec.outer}, "fractional");
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown kernel kind");
}

std::size_t bins_within(double radius, double dx) {
  if (!(radius > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(radius / dx + 1e-9));
}

SampledFunction apply_riemann(const RadialKernel& phi, const SampledFunction& u,
                              BoundaryRule rule) {
  const std::vector<double> bins = phi.tabulate(u.grid().dx);
  return apply_riemann(bins, u, rule);
}

SampledFunction apply_riemann(std::span<const double> phi_bins, const SampledFunction& u,
                              BoundaryRule rule) {
  const simd::KernelTable& kt = simd::active();
  const double dx = u.grid().dx;
  const auto v = u.values();
  std::vector<double> g(v.size(), 0.0);
  for (std::size_t k = 1; k <= phi_bins.size(); ++k) {
    const double w = phi_bins[k - 1] * dx;
    if (w == 0.0) continue;
    kt.accumulate_nonlocal(v.data(), v.size(), k, w, rule, g.data());
  }
  return SampledFunction(u.grid(), std::move(g));
}

double apply_quadrature(const RadialKernel& phi, const std::function<double(double)>& u, double x,
                        double tol, std::span<const double> u_breakpoints) {
  const double R0 = phi.support_radius();
  const double ux = u(x);
  std::vector<double> cuts(u_breakpoints.begin(), u_breakpoints.end());
  cuts.push_back(x);
  for (double b : phi.breakpoints()) {
    cuts.push_back(x - b);
    cuts.push_back(x + b);
  }
  auto integrand = [&](double y) { return phi(std::fabs(y - x)) * (u(y) - ux); };
  return integrate_adaptive(integrand, x - R0, x + R0, tol, cuts).value;
}

}  // namespace nlkl
