#pragma once

// Maximal, Littlewood-Paley, variation and oscillation operators of the heat
// semigroup on sampled time grids, plus orbit-ball and Euclidean-ball
// maximal functions.

#include <span>
#include <vector>

#include "dunkl/discretization.hpp"
#include "dunkl/reflection.hpp"
#include "dunkl/semigroup.hpp"

namespace dunkl {

/// Strictly decreasing positive times.
struct TimeGrid {
  std::vector<double> times;

  static TimeGrid log_uniform(double t_min, double t_max, std::size_t count);
  static TimeGrid from(std::vector<double> times);  // validates
  std::size_t size() const noexcept { return times.size(); }
};

inline constexpr double kDefaultTimeMin = 1e-3;
inline constexpr double kDefaultTimeMax = 1e2;
inline constexpr std::size_t kDefaultTimeCount = 64;

/// Brackets [t_{j+1}, t_j] of a decreasing sequence and the time-grid
/// samples falling in each (endpoints shared between neighbours).
struct OscillationBrackets {
  std::vector<double> edges;
  std::vector<std::vector<std::size_t>> members;
};

OscillationBrackets make_brackets(const TimeGrid& grid, std::vector<double> edges);
/// Edges at every `stride`-th time of the grid.
OscillationBrackets strided_brackets(const TimeGrid& grid, std::size_t stride);

/// Exact supremum over subsequences of (sum |a_i - a_j|^sigma)^{1/sigma},
/// values given in decreasing-time order. Requires sigma >= 1.
double variation_core(std::span<const double> a, double sigma);

/// (sum over brackets of (max - min)^2)^{1/2}.
double oscillation_core(std::span<const double> values, const OscillationBrackets& brackets);

/// Per-node reductions of one trajectory traj[time][node].
using Trajectory = std::vector<std::vector<double>>;

std::vector<double> maximal_from(const Trajectory& traj);
std::vector<double> variation_from(const Trajectory& traj, double sigma);
std::vector<double> oscillation_from(const Trajectory& traj, const OscillationBrackets& brackets);

struct GFunctionValues {
  std::vector<double> values;
  /// Largest share of the dt/t integral carried by the first or the last
  /// decade of the time grid, over nodes where the integral is not negligible.
  double boundary_fraction = 0.0;
  bool truncation_warning = false;
};

inline constexpr double kBoundaryDecadeLimit = 0.01;

/// (integral |T_{t,m} f|^2 dt/t)^{1/2} by the trapezoid rule in log t.
GFunctionValues gfunc_from(const Trajectory& traj, const TimeGrid& grid);

SampledFunction maximal_operator(const HeatSemigroup& S, const SampledFunction& f,
                                 const TimeGrid& grid, int m);
GFunctionValues littlewood_paley_g(const HeatSemigroup& S, const SampledFunction& f, int m,
                                   const TimeGrid& grid);
SampledFunction variation_operator(const HeatSemigroup& S, const SampledFunction& f,
                                   const TimeGrid& grid, double sigma, int m);
SampledFunction oscillation_operator(const HeatSemigroup& S, const SampledFunction& f,
                                     const TimeGrid& grid, const OscillationBrackets& brackets,
                                     int m);

/// Dyadic radii from the smallest node spacing up to the box half width.
std::vector<double> default_radii(const WeightedGrid& grid);

/// max over radii of the omega-average of |f| over the nodes y with
/// rho(x, y) < r (orbit balls).
SampledFunction rho_maximal(const WeylGroup& G, const SampledFunction& f,
                            std::span<const double> radii);

/// Same with Euclidean balls |x - y| < r.
SampledFunction hl_maximal(const SampledFunction& f, std::span<const double> radii);

}  // namespace dunkl
