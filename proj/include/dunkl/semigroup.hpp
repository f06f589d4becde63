#pragma once

// Heat semigroup T_{t,m} = t^m d^m/dt^m T_t applied to sampled functions.
// The Z2^d kernel factors over axes, so T_t is a product of one n x n
// matrix per axis; t^m d^m/dt^m is applied at operator level with the same
// Richardson stencil as kernel_time_derivative.

#include <span>
#include <vector>

#include "dunkl/discretization.hpp"
#include "dunkl/heat_kernel.hpp"

namespace dunkl {

/// Values over a time grid: values[f][time][node].
using Trajectories = std::vector<std::vector<std::vector<double>>>;

class HeatSemigroup {
 public:
  /// The grid's root system must be Z2^d with the model's multiplicities.
  HeatSemigroup(HeatKernelModel model, GridPtr grid);

  const HeatKernelModel& model() const noexcept { return model_; }
  const GridPtr& grid() const noexcept { return grid_; }

  SampledFunction apply(const SampledFunction& f, double t, int m = 0) const;
  std::vector<SampledFunction> apply_many(std::span<const SampledFunction> fs, double t,
                                          int m = 0) const;

  /// T_{t,m} f for every f and every t in `times`.
  Trajectories trajectories(std::span<const SampledFunction> fs, std::span<const double> times,
                            int m = 0) const;

  /// Discrete kernel row sums (T_t 1) at t; equals 1 up to truncation and
  /// quadrature error.
  std::vector<double> row_mass(double t) const;

 private:
  // One axis: K[a][b] = T_t(x_a, x_b) * width_b * 2^k |x_b|^{2k}, row-major.
  std::vector<double> axis_matrix(std::size_t axis, double t) const;
  void apply_axis(const std::vector<double>& K, std::size_t axis, std::vector<double>& data) const;
  // sum_i w_i (prod_j K_j(t_i)) applied to each of the inputs.
  std::vector<std::vector<double>> apply_stencil(const std::vector<std::vector<double>>& inputs,
                                                 double t, int m) const;

  HeatKernelModel model_;
  GridPtr grid_;
};

}  // namespace dunkl
