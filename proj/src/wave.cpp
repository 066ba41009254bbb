#include "nlkl/wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlkl/errors.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {

std::string to_string(LoadingKind kind) {
  switch (kind) {
    case LoadingKind::OscillatingSource: return "source";
    case LoadingKind::PlaneWaveCos: return "cos";
    case LoadingKind::PlaneWaveSin: return "sin";
    case LoadingKind::WavePacket: return "packet";
  }
  return "source";
}

LoadingKind loading_kind_from_string(const std::string& name) {
  if (name == "source" || name == "1") return LoadingKind::OscillatingSource;
  if (name == "cos" || name == "2") return LoadingKind::PlaneWaveCos;
  if (name == "sin" || name == "3") return LoadingKind::PlaneWaveSin;
  if (name == "packet" || name == "4") return LoadingKind::WavePacket;
  throw Error(ErrorCode::Config, "unknown loading type '" + name + "'");
}

double LoadingSpec::source(double x, double t) const {
  if (kind != LoadingKind::OscillatingSource) return 0.0;
  const double jl = j * period;
  const double a = 2.0 * x / (5.0 * jl);
  const double tau = (t - 0.8) / 0.8;
  const double c = std::cos(2.0 * std::numbers::pi * x / jl);
  return std::exp(-a * a) * std::exp(-tau * tau) * c * c;
}

std::optional<double> LoadingSpec::boundary_velocity(double t) const {
  switch (kind) {
    case LoadingKind::OscillatingSource: return std::nullopt;
    case LoadingKind::PlaneWaveCos: return std::cos(j * t);
    case LoadingKind::PlaneWaveSin: return std::sin(j * t);
    case LoadingKind::WavePacket: {
      const double s = t / 5.0 - 3.0;
      return std::sin(j * t) * std::exp(-s * s);
    }
  }
  return std::nullopt;
}

LoadingSpec make_loading(LoadingKind kind, double j) {
  LoadingSpec s;
  s.kind = kind;
  s.j = j;
  if (kind == LoadingKind::WavePacket) {
    s.b = 133.3;
    s.T = 100.0;
  }
  return s;
}

std::vector<double> loading_indices(LoadingKind kind) {
  std::vector<double> out;
  switch (kind) {
    case LoadingKind::OscillatingSource:
      for (int j = 1; j <= 20; ++j) out.push_back(j);
      break;
    case LoadingKind::PlaneWaveCos:
    case LoadingKind::PlaneWaveSin:
      for (int i = 1; i <= 11; ++i) out.push_back(0.35 * i);
      break;
    case LoadingKind::WavePacket:
      out = {1.0, 2.0, 3.0};
      break;
  }
  return out;
}

bool leapfrog_stable(std::span<const double> phi_bins, double dx, double dt) {
  double mass = 0.0;
  for (double p : phi_bins) mass += std::max(p, 0.0);
  return dt * dt * 2.0 * mass * dx < 4.0;
}

WaveSolver::WaveSolver(std::vector<double> phi_bins, double dx, double dt, BoundaryRule rule)
    : phi_(std::move(phi_bins)), dx_(dx), dt_(dt), rule_(rule) {
  if (!(dx > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dx and dt must be > 0");
  if (!leapfrog_stable(phi_, dx, dt)) {
    throw Error(ErrorCode::StabilityViolation, "dt^2 * 2 int phi+ >= 4; reduce dt");
  }
}

WaveState WaveSolver::step(const WaveState& s, std::span<const double> g,
                           std::optional<double> boundary_velocity) const {
  const std::size_t n = s.grid.count;
  if (s.u_prev.size() != n || s.u_curr.size() != n || g.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "wave state or source length differs from grid");
  }
  const simd::KernelTable& kt = simd::active();
  std::vector<double> lu(n, 0.0);
  for (std::size_t k = 1; k <= phi_.size(); ++k) {
    const double w = phi_[k - 1] * dx_;
    if (w != 0.0) kt.accumulate_nonlocal(s.u_curr.data(), n, k, w, rule_, lu.data());
  }
  WaveState next;
  next.grid = s.grid;
  next.dt = dt_;
  next.time = s.time + dt_;
  next.u_prev = s.u_curr;
  next.u_curr.resize(n);
  const double h2 = dt_ * dt_;
  for (std::size_t j = 0; j < n; ++j) {
    next.u_curr[j] = 2.0 * s.u_curr[j] - s.u_prev[j] + h2 * (lu[j] + g[j]);
  }
  if (boundary_velocity) next.u_curr[0] = s.u_curr[0] + dt_ * *boundary_velocity;
  return next;
}

Trajectory simulate(const RadialKernel& phi, const LoadingSpec& loading, double dx, double dt,
                    BoundaryRule rule) {
  if (!(loading.b > 0.0) || !(loading.T > 0.0)) throw Error(ErrorCode::InvalidArgument, "loading needs b > 0 and T > 0");
  const UniformGrid grid = UniformGrid::spanning(-loading.b, loading.b, dx);
  const WaveSolver solver(phi.tabulate(dx), dx, dt, rule);
  const auto steps = static_cast<std::size_t>(std::lround(loading.T / dt));

  Trajectory traj;
  traj.grid = grid;
  traj.dt = dt;
  traj.boundary_driven = loading.boundary_driven();
  auto source_at = [&](double t) {
    std::vector<double> g(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) g[j] = loading.source(grid.node(j), t);
    return g;
  };

  WaveState s{grid, std::vector<double>(grid.count, 0.0), std::vector<double>(grid.count, 0.0), dt, 0.0};
  traj.u.push_back(s.u_curr);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    traj.g.push_back(source_at(t));
    s = solver.step(s, traj.g.back(), loading.boundary_velocity(static_cast<double>(n + 1) * dt));
    s.time = static_cast<double>(n + 1) * dt;
    traj.u.push_back(s.u_curr);
  }
  traj.g.push_back(source_at(static_cast<double>(steps) * dt));
  return traj;
}

Dataset build_training_pairs(const std::vector<std::vector<double>>& u,
                             const std::vector<std::vector<double>>& g, const UniformGrid& grid,
                             double dt, bool boundary_driven) {
  if (u.size() < 3) throw Error(ErrorCode::LengthMismatch, "trajectory needs at least three snapshots");
  if (g.size() + 1 < u.size()) throw Error(ErrorCode::LengthMismatch, "source has fewer snapshots than the trajectory");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  for (const auto& v : u) {
    if (v.size() != grid.count) throw Error(ErrorCode::LengthMismatch, "snapshot length differs from grid");
  }
  for (const auto& v : g) {
    if (v.size() != grid.count) throw Error(ErrorCode::LengthMismatch, "source length differs from grid");
  }
  std::vector<std::uint8_t> mask;
  if (boundary_driven) {
    mask.assign(grid.count, 1);
    mask[0] = 0;
  }
  const double inv = 1.0 / (dt * dt);
  std::vector<DataPair> pairs;
  pairs.reserve(u.size() - 2);
  for (std::size_t n = 1; n + 1 < u.size(); ++n) {
    std::vector<double> f(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) {
      f[j] = (u[n + 1][j] - 2.0 * u[n][j] + u[n - 1][j]) * inv - g[n][j];
    }
    if (boundary_driven) f[0] = 0.0;
    pairs.emplace_back(SampledFunction(grid, u[n]), SampledFunction(grid, std::move(f)), mask);
  }
  return Dataset(std::move(pairs));
}

Dataset build_training_pairs(const Trajectory& traj) {
  return build_training_pairs(traj.u, traj.g, traj.grid, traj.dt, traj.boundary_driven);
}

Dataset simulate_training_set(const RadialKernel& phi, const std::vector<LoadingSpec>& loadings,
                              double dx, double dt, BoundaryRule rule) {
  if (loadings.empty()) throw Error(ErrorCode::InvalidArgument, "no loadings given");
  for (const LoadingSpec& l : loadings) {
    if (l.b != loadings.front().b) throw Error(ErrorCode::InvalidArgument, "loadings must share one domain");
  }
  std::vector<Dataset> parts(loadings.size());
  parallel_for(loadings.size(), [&](std::size_t i) {
    parts[i] = build_training_pairs(simulate(phi, loadings[i], dx, dt, rule));
  });
  std::vector<DataPair> pairs;
  for (const Dataset& d : parts) pairs.insert(pairs.end(), d.pairs().begin(), d.pairs().end());
  return Dataset(std::move(pairs));
}

double dispersion_omega2(std::span<const double> phi_bins, double dx, double k) {
  double s = 0.0;
  for (std::size_t b = 1; b <= phi_bins.size(); ++b) {
    s += 2.0 * phi_bins[b - 1] * (1.0 - std::cos(k * static_cast<double>(b) * dx));
  }
  return s * dx;
}

double dispersion_omega2(const RadialKernel& phi, double dx, double k) {
  return dispersion_omega2(phi.tabulate(dx), dx, k);
}

DispersionCurve dispersion_curve(std::span<const double> phi_bins, double dx, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "dispersion curve needs at least two wavenumbers");
  DispersionCurve c;
  const double kmax = std::numbers::pi / dx;
  c.k.resize(count);
  c.omega2.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    c.k[i] = kmax * static_cast<double>(i) / static_cast<double>(count - 1);
    c.omega2[i] = dispersion_omega2(phi_bins, dx, c.k[i]);
  }
  std::vector<double> omega(count);
  for (std::size_t i = 0; i < count; ++i) omega[i] = std::sqrt(std::max(c.omega2[i], 0.0));
  c.group_velocity.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == count ? i : i + 1;
    c.group_velocity[i] = (omega[hi] - omega[lo]) / (c.k[hi] - c.k[lo]);
  }
  c.min_omega2 = *std::min_element(c.omega2.begin(), c.omega2.end());
  c.stable = c.min_omega2 >= -1e-10;
  return c;
}

RadialKernel bump_kernel(double amplitude, double center, double width, double cutoff) {
  if (!(width > 0.0) || !(cutoff > 0.0)) throw Error(ErrorCode::InvalidSpec, "bump kernel needs width > 0 and cutoff > 0");
  return RadialKernel(
      [=](double r) {
        const double z = (r - center) / width;
        return amplitude * std::exp(-0.5 * z * z);
      },
      cutoff, {cutoff}, "bump");
}

double relative_l2_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "vectors differ in length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroTruth, "reference vanishes");
  return std::sqrt(num / den);
}

}  // namespace nlkl
