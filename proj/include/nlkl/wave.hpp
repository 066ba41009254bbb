#pragma once

// Nonlocal wave equation u_tt = L_phi[u] + g: explicit central-difference
// stepping, loading types, training-pair extraction and dispersion checks.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlkl/grid.hpp"
#include "nlkl/operator.hpp"

namespace nlkl {

struct WaveState {
  UniformGrid grid;
  std::vector<double> u_prev;
  std::vector<double> u_curr;
  double dt = 0.02;
  double time = 0.0;
};

enum class LoadingKind { OscillatingSource = 1, PlaneWaveCos = 2, PlaneWaveSin = 3, WavePacket = 4 };

std::string to_string(LoadingKind kind);
LoadingKind loading_kind_from_string(const std::string& name);

struct LoadingSpec {
  LoadingKind kind = LoadingKind::OscillatingSource;
  double j = 1.0;        ///< loading index (integer for type 1, frequency otherwise)
  double b = 50.0;       ///< domain [-b, b]
  double T = 2.0;        ///< duration
  double period = 0.2;   ///< microstructure period L used by type 1

  /// Source g(x, t); zero for boundary-driven types.
  double source(double x, double t) const;
  /// Prescribed velocity at x = -b for types 2-4.
  std::optional<double> boundary_velocity(double t) const;
  bool boundary_driven() const { return kind != LoadingKind::OscillatingSource; }
};

/// Table defaults: b = 50, T = 2 for types 1-3; b = 133.3, T = 100 for type 4.
LoadingSpec make_loading(LoadingKind kind, double j);

/// The training index sets: j = 1..20 for type 1, 0.35..3.85 step 0.35 for
/// types 2 and 3, {1, 2, 3} for type 4.
std::vector<double> loading_indices(LoadingKind kind);

/// Explicit leapfrog with a tabulated kernel phi_bins[k - 1] = phi(k dx).
class WaveSolver {
 public:
  /// Throws StabilityViolation unless dt^2 * 2 sum_k max(phi_k, 0) dx < 4.
  WaveSolver(std::vector<double> phi_bins, double dx, double dt,
             BoundaryRule rule = BoundaryRule::ZeroExtension);

  /// u_next = 2 u - u_prev + dt^2 (L_phi[u] + g). With a boundary velocity v,
  /// node 0 is overwritten by u(0) + dt v.
  WaveState step(const WaveState& s, std::span<const double> g,
                 std::optional<double> boundary_velocity = std::nullopt) const;

  double dt() const { return dt_; }
  double dx() const { return dx_; }
  const std::vector<double>& phi_bins() const { return phi_; }

 private:
  std::vector<double> phi_;
  double dx_;
  double dt_;
  BoundaryRule rule_;
};

/// dt^2 * 2 sum_k max(phi_k, 0) dx < 4.
bool leapfrog_stable(std::span<const double> phi_bins, double dx, double dt);

struct Trajectory {
  UniformGrid grid;
  double dt = 0.02;
  std::vector<std::vector<double>> u;  ///< snapshots t^n = n dt, n = 0..steps
  std::vector<std::vector<double>> g;  ///< source at t^n
  bool boundary_driven = false;
};

/// Starts at rest and runs round(T/dt) steps on [-b, b] with spacing dx.
Trajectory simulate(const RadialKernel& phi, const LoadingSpec& loading, double dx, double dt,
                    BoundaryRule rule = BoundaryRule::ZeroExtension);

/// Pairs (u^n, f^n) for n = 1..steps-1 with
/// f^n = (u^{n+1} - 2 u^n + u^{n-1}) / dt^2 - g^n. Driven boundary nodes are
/// marked unobserved. Throws LengthMismatch on inconsistent input.
Dataset build_training_pairs(const std::vector<std::vector<double>>& u,
                             const std::vector<std::vector<double>>& g, const UniformGrid& grid,
                             double dt, bool boundary_driven = false);

Dataset build_training_pairs(const Trajectory& traj);

/// Simulates every loading (all on the same [-b, b]) and pools their
/// training pairs in loading order.
Dataset simulate_training_set(const RadialKernel& phi, const std::vector<LoadingSpec>& loadings,
                              double dx, double dt, BoundaryRule rule = BoundaryRule::ZeroExtension);

/// omega^2(k) = sum_b 2 phi(r_b) (1 - cos(k r_b)) dx.
double dispersion_omega2(std::span<const double> phi_bins, double dx, double k);
double dispersion_omega2(const RadialKernel& phi, double dx, double k);

struct DispersionCurve {
  std::vector<double> k;
  std::vector<double> omega2;
  std::vector<double> group_velocity;  ///< d omega / dk, centered differences
  double min_omega2 = 0.0;
  bool stable = true;                   ///< min omega^2 >= -1e-10
};

/// Evaluates on `count` wavenumbers spanning [0, pi/dx].
DispersionCurve dispersion_curve(std::span<const double> phi_bins, double dx,
                                 std::size_t count = 512);

/// amplitude * exp(-(r - center)^2 / (2 width^2)) on [0, cutoff]; a smooth
/// nonnegative test kernel for closed-loop wave experiments.
RadialKernel bump_kernel(double amplitude = 4.0, double center = 0.75, double width = 0.2,
                         double cutoff = 1.5);

/// ||u_a - u_b|| / ||u_b|| on a grid.
double relative_l2_difference(std::span<const double> a, std::span<const double> b);

}  // namespace nlkl
