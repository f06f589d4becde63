#pragma once

// Weighted tensor grids realizing integrals against d(omega_k) on a box,
// plus adaptive ball volumes omega_k(B(x,r)) that do not depend on a grid.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "dunkl/numeric.hpp"
#include "dunkl/reflection.hpp"

namespace dunkl {

struct GridAxis {
  std::vector<double> nodes;   // increasing, symmetric about 0
  std::vector<double> widths;  // Lebesgue panel width attached to each node
  bool graded = false;
};

/// Tensor-product grid on [-L, L]^d. Each axis is a composite midpoint rule
/// in a mapped variable; axes whose coordinate hyperplane carries a singular
/// weight factor are graded toward 0 over the 8 panels nearest to it. Node
/// weights are panel volume times omega_k(node).
class WeightedGrid {
 public:
  WeightedGrid(RootSystem R, double half_width, int resolution, double grading,
               std::vector<GridAxis> axes);

  const RootSystem& root_system() const noexcept { return R_; }
  int dimension() const noexcept { return R_.dimension(); }
  double half_width() const noexcept { return L_; }
  int resolution() const noexcept { return n_; }
  double grading() const noexcept { return grading_; }
  std::span<const GridAxis> axes() const noexcept { return axes_; }

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> node(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dimension()),
            static_cast<std::size_t>(dimension())};
  }
  std::span<const double> quad_weights() const noexcept { return weights_; }
  /// Panel volume without the omega_k factor.
  std::span<const double> cell_volumes() const noexcept { return cells_; }

  /// Per-axis index of node i (last axis varies fastest).
  std::vector<std::size_t> multi_index(std::size_t i) const;
  std::size_t flat_index(std::span<const std::size_t> idx) const;

  /// Index of the node at point p (exact up to rounding), or npos.
  std::size_t find_node(std::span<const double> p) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Total mass sum of quad weights.
  double total_mass() const;

 private:
  RootSystem R_;
  double L_;
  int n_;
  double grading_;
  std::vector<GridAxis> axes_;
  std::vector<std::size_t> strides_;
  std::vector<double> coords_;
  std::vector<double> cells_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const WeightedGrid>;

/// Values of a function on the nodes of one grid.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(GridPtr grid, std::vector<double> values);
  static SampledFunction constant(GridPtr grid, double c);

  template <class F>
  static SampledFunction from(GridPtr grid, F&& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
    return SampledFunction(std::move(grid), std::move(v));
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  bool same_grid(const SampledFunction& other) const noexcept { return grid_ == other.grid_; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

inline constexpr int kMinResolution = 8;
inline constexpr double kDefaultGrading = 2.0;
inline constexpr int kGradedPanels = 8;

GridPtr build_grid(const RootSystem& R, double half_width, int resolution,
                   double grading = kDefaultGrading);

/// sum values * quad_weights (pairwise summation).
double integrate(const WeightedGrid& grid, const SampledFunction& f);
double integrate(const SampledFunction& f);

/// L^p(omega) norm on the grid; p = infinity gives the sup over nodes.
double lp_norm(const SampledFunction& f, double p);

inline constexpr double kDefaultBallTolerance = 1e-6;

/// omega_k(B(x,r)) by adaptive tanh-sinh quadrature split at the points where
/// the weight is non-smooth. Throws QuadratureError if the requested relative
/// tolerance is not reached.
double ball_volume(const RootSystem& R, std::span<const double> x, double r,
                   double tolerance = kDefaultBallTolerance);

/// omega_k(theta(B(x,r))): #G times the weight of B(x+, r) restricted to the
/// closed chamber, where x+ is the chamber representative of x.
double orbit_ball_volume(const RootSystem& R, const WeylGroup& G, std::span<const double> x,
                         double r, double tolerance = kDefaultBallTolerance);

/// Plain text table: a header line, then one row per node with coordinates
/// and the quadrature weight.
void write_grid_table(std::ostream& os, const WeightedGrid& grid);

struct GridTableRow {
  Vec node;
  double weight = 0.0;
};
std::vector<GridTableRow> read_grid_table(std::istream& is);

/// Diagnostics for `grid check`.
struct GridCheck {
  bool weights_positive = true;
  bool avoids_hyperplanes = true;
  double total_mass = 0.0;
  double exact_mass = 0.0;  // closed form on Z2^d boxes, NaN otherwise
  double relative_mass_error = 0.0;
};
GridCheck check_grid(const WeightedGrid& grid);

/// Closed form of omega_k([-L,L]^d) for Z2^d.
double z2_box_mass(std::span<const double> axis_multiplicities, double half_width);

}  // namespace dunkl
