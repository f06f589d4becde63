#pragma once

// Explicit Dunkl heat kernel for Z2^d, its time derivatives, the Dunkl
// Laplacian on grids, and empirical Gaussian bound fits.

#include <span>
#include <vector>

#include "dunkl/discretization.hpp"
#include "dunkl/reflection.hpp"

namespace dunkl {

struct DerivativeConfig {
  double h_rel = 1e-2;        // base step h = t * h_rel
  int richardson_levels = 2;  // extrapolation levels on top of the base difference
};

inline constexpr int kMaxTimeDerivative = 4;

/// Z2^d multiplicity configuration plus derivative settings.
class HeatKernelModel {
 public:
  /// Throws std::invalid_argument unless R is a Z2^d product.
  explicit HeatKernelModel(const RootSystem& R, DerivativeConfig cfg = {});
  HeatKernelModel(std::vector<double> axis_multiplicities, DerivativeConfig cfg = {});

  int dimension() const noexcept { return static_cast<int>(k_.size()); }
  std::span<const double> multiplicities() const noexcept { return k_; }
  double multiplicity(int axis) const { return k_.at(static_cast<std::size_t>(axis)); }
  const DerivativeConfig& derivative_config() const noexcept { return cfg_; }

 private:
  std::vector<double> k_;
  DerivativeConfig cfg_;
};

/// Rank-one kernel with respect to 2^k |y|^{2k} dy.
double kernel_rank1(double k, double t, double x, double y);

/// Product of rank-one kernels over the axes.
double kernel(const HeatKernelModel& model, double t, std::span<const double> x,
              std::span<const double> y);

/// Linear functional t^m d^m/dt^m g(t) ~ sum_i weight_i * g(t * (1 + offset_i)).
struct TimeStencil {
  std::vector<double> offsets;
  std::vector<double> weights;
};

/// `primary` is the fully extrapolated rule, `secondary` the rule with one
/// level less; their difference is the reported error estimate.
struct DerivativeStencils {
  TimeStencil primary;
  TimeStencil secondary;
};

DerivativeStencils time_derivative_stencils(int m, const DerivativeConfig& cfg);

struct DerivativeValue {
  double value = 0.0;
  double error = 0.0;
};

/// t^m d^m/dt^m T_t(x,y), 0 <= m <= 4.
DerivativeValue kernel_time_derivative(const HeatKernelModel& model, int m, double t,
                                       std::span<const double> x, std::span<const double> y);

/// Integral of T_t(x, .) against d(omega_k) over R^d by nested adaptive
/// quadrature (independent of any grid).
double kernel_mass(const HeatKernelModel& model, double t, std::span<const double> x,
                   double tolerance = 1e-12);

/// Dunkl Laplacian on a grid: second-order differences along each axis plus
/// the reflection terms, evaluated with exact reflected-node lookup.
/// `interior` is false on the outermost nodes of each axis and on the nodes
/// next to a hyperplane carrying k > 0.
struct LaplacianResult {
  SampledFunction values;
  std::vector<bool> interior;
};

/// Throws if the node set is not invariant under the reflections.
LaplacianResult dunkl_laplacian(const RootSystem& R, const SampledFunction& f);

struct KernelSample {
  double t = 1.0;
  Vec x;
  Vec y;
};

struct LipschitzSample {
  double t = 1.0;
  Vec x;
  Vec y;
  Vec z;
};

/// Empirical constant for the Gaussian bound
/// |t^m d^m T_t(x,y)| <= C / V(x,y,sqrt t) * exp(-c rho(x,y)^2 / t).
struct KernelBoundFit {
  double C = 0.0;
  double c = 0.125;
  int m = 0;
  std::size_t samples = 0;
  std::size_t argmax = 0;  // index into the sample
};

inline constexpr double kDefaultGaussianC = 0.125;

/// V(x,y,r) = max(omega(B(x,r)), omega(B(y,r))).
double ball_volume_max(const RootSystem& R, std::span<const double> x, std::span<const double> y,
                       double r);

KernelBoundFit fit_gaussian_bound(const HeatKernelModel& model, const RootSystem& R,
                                  const WeylGroup& G, int m, std::span<const KernelSample> sample,
                                  double c = kDefaultGaussianC);

/// Same fit for the Lipschitz bound in y, scaled by sqrt(t)/|y - z| and
/// restricted to |y - z| < sqrt(t).
KernelBoundFit fit_lipschitz_bound(const HeatKernelModel& model, const RootSystem& R,
                                   const WeylGroup& G, int m,
                                   std::span<const LipschitzSample> sample,
                                   double c = kDefaultGaussianC);

/// Sample in scaled coordinates x = sqrt(t) u, y = sqrt(t) v with u, v on a
/// per-axis lattice in [-span, span] and the given times.
std::vector<KernelSample> scaled_kernel_sample(int dimension, std::span<const double> times,
                                               double span, int points_per_axis);

}  // namespace dunkl
