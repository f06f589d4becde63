#include "dunkl/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

// Boost asserts that no abscissa rounds onto an endpoint; the integrands here
// are finite at the endpoints, so the check is disabled.
#define BOOST_DISABLE_ASSERTS
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace dunkl {

// ---------------------------------------------------------------------------
// Grid construction

namespace {

// Graded map on [0,1]: psi(u) = u0 * p(u/u0) below u0 and psi(u) = u above,
// with p(s) = a s^g + b s^(g+1) + c s^(g+2) and p(1) = p'(1) = 1, p''(1) = 0.
// A C^2 junction keeps the midpoint rule second order; with only C^1 the
// jump in psi'' (of size 1/u0) costs a full order.
struct GradedMap {
  double u0;
  double g;
  double a, b, c;

  GradedMap(double u0_, double g_) : u0(u0_), g(g_) {
    // Solve the 3x3 system for (a, b, c) by elimination.
    const double m[3][4] = {{1.0, 1.0, 1.0, 1.0},
                            {g, g + 1.0, g + 2.0, 1.0},
                            {g * (g - 1.0), (g + 1.0) * g, (g + 2.0) * (g + 1.0), 0.0}};
    double r[3][4];
    std::copy(&m[0][0], &m[0][0] + 12, &r[0][0]);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double f = r[j][i] / r[i][i];
        for (int q = i; q < 4; ++q) r[j][q] -= f * r[i][q];
      }
    c = r[2][3] / r[2][2];
    b = (r[1][3] - r[1][2] * c) / r[1][1];
    a = (r[0][3] - r[0][1] * b - r[0][2] * c) / r[0][0];
  }

  double value(double u) const {
    if (u >= u0) return u;
    const double s = u / u0;
    return u0 * std::pow(s, g) * (a + s * (b + s * c));
  }
  double derivative(double u) const {
    if (u >= u0) return 1.0;
    const double s = u / u0;
    return std::pow(s, g - 1.0) * (g * a + s * ((g + 1.0) * b + s * (g + 2.0) * c));
  }
};

GridAxis make_axis(double L, int n, bool graded, double grading) {
  const int half = n / 2;
  const GradedMap map(static_cast<double>(std::min(kGradedPanels, half)) / half,
                       graded ? grading : 1.0);
  std::vector<double> pos(static_cast<std::size_t>(half)), w(static_cast<std::size_t>(half));
  for (int i = 0; i < half; ++i) {
    const double u = (i + 0.5) / half;
    pos[static_cast<std::size_t>(i)] = L * map.value(u);
    w[static_cast<std::size_t>(i)] = L * map.derivative(u) / half;
  }
  GridAxis axis;
  axis.graded = graded && grading != 1.0;
  axis.nodes.reserve(static_cast<std::size_t>(n));
  axis.widths.reserve(static_cast<std::size_t>(n));
  for (int i = half - 1; i >= 0; --i) {
    axis.nodes.push_back(-pos[static_cast<std::size_t>(i)]);
    axis.widths.push_back(w[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < half; ++i) {
    axis.nodes.push_back(pos[static_cast<std::size_t>(i)]);
    axis.widths.push_back(w[static_cast<std::size_t>(i)]);
  }
  return axis;
}

}  // namespace

WeightedGrid::WeightedGrid(RootSystem R, double half_width, int resolution, double grading,
                           std::vector<GridAxis> axes)
    : R_(std::move(R)), L_(half_width), n_(resolution), grading_(grading), axes_(std::move(axes)) {
  const int d = R_.dimension();
  if (static_cast<int>(axes_.size()) != d) throw std::invalid_argument("one axis per dimension");
  strides_.assign(static_cast<std::size_t>(d), 1);
  std::size_t total = 1;
  for (int j = d - 1; j >= 0; --j) {
    strides_[static_cast<std::size_t>(j)] = total;
    total *= axes_[static_cast<std::size_t>(j)].nodes.size();
  }
  coords_.resize(total * static_cast<std::size_t>(d));
  cells_.resize(total);
  weights_.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    double vol = 1.0;
    std::size_t rem = i;
    for (int j = 0; j < d; ++j) {
      const std::size_t s = strides_[static_cast<std::size_t>(j)];
      const std::size_t idx = rem / s;
      rem %= s;
      coords_[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
          axes_[static_cast<std::size_t>(j)].nodes[idx];
      vol *= axes_[static_cast<std::size_t>(j)].widths[idx];
    }
    cells_[i] = vol;
    weights_[i] = vol * weight(R_, node(i));
  }
}

std::vector<std::size_t> WeightedGrid::multi_index(std::size_t i) const {
  std::vector<std::size_t> idx(strides_.size());
  for (std::size_t j = 0; j < strides_.size(); ++j) {
    idx[j] = i / strides_[j];
    i %= strides_[j];
  }
  return idx;
}

std::size_t WeightedGrid::flat_index(std::span<const std::size_t> idx) const {
  std::size_t i = 0;
  for (std::size_t j = 0; j < strides_.size(); ++j) i += idx[j] * strides_[j];
  return i;
}

std::size_t WeightedGrid::find_node(std::span<const double> p) const {
  // Binary search per axis; every axis is sorted.
  std::vector<std::size_t> idx(strides_.size());
  for (std::size_t j = 0; j < strides_.size(); ++j) {
    const auto& nodes = axes_[j].nodes;
    const double tol = 1e-9 * std::max(1.0, L_);
    auto it = std::lower_bound(nodes.begin(), nodes.end(), p[j] - tol);
    if (it == nodes.end() || std::abs(*it - p[j]) > tol) return npos;
    idx[j] = static_cast<std::size_t>(it - nodes.begin());
  }
  return flat_index(idx);
}

double WeightedGrid::total_mass() const { return pairwise_sum(weights_); }

SampledFunction::SampledFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("SampledFunction requires a grid");
  if (values_.size() != grid_->size())
    throw std::invalid_argument("SampledFunction: value count does not match node count");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("SampledFunction: values must be finite");
}

SampledFunction SampledFunction::constant(GridPtr grid, double c) {
  const std::size_t n = grid->size();
  return SampledFunction(std::move(grid), std::vector<double>(n, c));
}

GridPtr build_grid(const RootSystem& R, double half_width, int resolution, double grading) {
  if (!(half_width > 0.0)) throw std::invalid_argument("grid half width must be positive");
  if (resolution < kMinResolution)
    throw std::invalid_argument("grid resolution below 8 nodes per axis: quadrature unreliable");
  if (resolution % 2 != 0)
    throw std::invalid_argument("grid resolution must be even (node set symmetric about 0)");
  if (!(grading >= 1.0 && grading <= 3.0))
    throw std::invalid_argument("grading exponent must lie in [1, 3]");
  const int d = R.dimension();
  if (d > 3) throw std::invalid_argument("grids are supported for d <= 3");

  // Axis j is graded when a root with k > 0 is parallel to e_j. Roots off the
  // axes get distinct per-axis resolutions so that no node lands on them.
  std::vector<bool> graded(static_cast<std::size_t>(d), false);
  bool oblique = false;
  const auto pos = R.positive_roots();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (R.multiplicity(i) == 0.0) continue;
    int axis = -1, nonzero = 0;
    for (int j = 0; j < d; ++j)
      if (std::abs(pos[i][static_cast<std::size_t>(j)]) > 1e-12) {
        axis = j;
        ++nonzero;
      }
    if (nonzero == 1)
      graded[static_cast<std::size_t>(axis)] = true;
    else
      oblique = true;
  }
  std::vector<GridAxis> axes;
  for (int j = 0; j < d; ++j) {
    const int n = oblique ? resolution + 2 * j : resolution;
    axes.push_back(make_axis(half_width, n, graded[static_cast<std::size_t>(j)], grading));
  }
  auto grid = std::make_shared<const WeightedGrid>(R, half_width, resolution, grading, std::move(axes));
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto x = grid->node(i);
    for (std::size_t r = 0; r < pos.size(); ++r) {
      if (R.multiplicity(r) == 0.0) continue;
      if (std::abs(dot(pos[r], x)) < 1e-12 * half_width)
        throw std::runtime_error("grid node lies on a reflection hyperplane; change the resolution");
    }
  }
  return grid;
}

double integrate(const WeightedGrid& grid, const SampledFunction& f) {
  if (f.grid().get() != &grid) throw std::invalid_argument("integrate: function lives on a different grid");
  return pairwise_dot(f.values(), grid.quad_weights());
}

double integrate(const SampledFunction& f) { return integrate(*f.grid(), f); }

double lp_norm(const SampledFunction& f, double p) {
  const auto w = f.grid()->quad_weights();
  const auto v = f.values();
  std::vector<double> terms(v.size());
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  for (std::size_t i = 0; i < v.size(); ++i) terms[i] = std::pow(std::abs(v[i]), p) * w[i];
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

double z2_box_mass(std::span<const double> k, double L) {
  double m = 1.0;
  for (double kj : k) m *= 2.0 * std::pow(2.0, kj) * std::pow(L, 2.0 * kj + 1.0) / (2.0 * kj + 1.0);
  return m;
}

GridCheck check_grid(const WeightedGrid& grid) {
  GridCheck c;
  const auto& R = grid.root_system();
  for (double w : grid.quad_weights())
    if (!(w > 0.0)) c.weights_positive = false;
  const auto pos = R.positive_roots();
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t r = 0; r < pos.size(); ++r)
      if (R.multiplicity(r) > 0.0 && dot(pos[r], grid.node(i)) == 0.0) c.avoids_hyperplanes = false;
  c.total_mass = grid.total_mass();
  if (R.is_z2_product()) {
    const auto k = R.axis_multiplicities();
    c.exact_mass = z2_box_mass(k, grid.half_width());
    c.relative_mass_error = std::abs(c.total_mass - c.exact_mass) / c.exact_mass;
  } else {
    c.exact_mass = std::numeric_limits<double>::quiet_NaN();
    c.relative_mass_error = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

void write_grid_table(std::ostream& os, const WeightedGrid& grid) {
  const int d = grid.dimension();
  for (int j = 0; j < d; ++j) os << 'x' << j << ',';
  os << "weight\n";
  os.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (double c : grid.node(i)) os << c << ',';
    os << grid.quad_weights()[i] << '\n';
  }
}

std::vector<GridTableRow> read_grid_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("grid table: missing header");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 2) throw std::invalid_argument("grid table: header needs coordinates and weight");
  std::vector<GridTableRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != columns) throw std::invalid_argument("grid table: ragged row");
    GridTableRow row;
    row.weight = vals.back();
    vals.pop_back();
    row.node = std::move(vals);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Ball volumes

namespace {

using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& integrator() {
  thread_local tanh_sinh<double> ts(12);
  return ts;
}

// |a . y + b|^p, or the half space a . y + b >= 0 when used as a constraint.
struct Affine2 {
  double a0 = 0.0, a1 = 0.0, b = 0.0, p = 0.0;
};

// tanh-sinh returns once the next level is expected to be accurate, but the
// error it reports is the previous level's difference; stop well below the
// target so the reported error meets it.
constexpr double kStopFactor = 1e-2;

// Absolute error of one integration level. Relative errors of inner
// integrals are useless near rho = 0 where the inner value vanishes, so
// inner errors are propagated as absolute bounds on the outer integrand.
struct ErrorTally {
  double abs_err = 0.0;
  void add(double err) { abs_err += err; }
};

// The integrands are nonnegative; on very short pieces the level-difference
// estimate can exceed the integral itself, which bounds the error.
double piece_error(double err, double l1) { return std::min(err, l1); }

template <class F>
double integrate_pieces(F&& f, std::vector<double> cuts, double tol, ErrorTally& tally) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b - a > 1e-12 * (std::abs(a) + std::abs(b) + 1e-300))) continue;
    double err = 0.0, l1 = 0.0;
    const double v = integrator().integrate(f, a, b, kStopFactor * tol, &err, &l1);
    tally.add(piece_error(err, l1));
    total += v;
  }
  return total;
}

// Integral of prod |a_i . y + b_i|^{p_i} over the disc B(c, r) intersected
// with the half planes in `walls`, in polar coordinates about c.
double disc_integral(double c0, double c1, double r, const std::vector<Affine2>& factors,
                     const std::vector<Affine2>& walls, double tol, double& abs_err) {
  abs_err = 0.0;
  if (!(r > 0.0)) return 0.0;
  std::vector<Affine2> lines;
  double constant = 1.0;
  for (const auto& f : factors) {
    if (f.a0 == 0.0 && f.a1 == 0.0) {
      constant *= std::pow(std::abs(f.b), f.p);
    } else {
      lines.push_back(f);
    }
  }
  for (const auto& w : walls) {
    if (w.a0 == 0.0 && w.a1 == 0.0) {
      if (w.b < 0.0) return 0.0;
    } else {
      lines.push_back({w.a0, w.a1, w.b, 0.0});
    }
  }
  if (constant == 0.0) return 0.0;

  auto inside = [&](double y0, double y1) {
    for (const auto& w : walls)
      if (w.a0 * y0 + w.a1 * y1 + w.b < 0.0) return false;
    return true;
  };
  auto density = [&](double y0, double y1) {
    double v = constant;
    for (const auto& f : factors)
      if (f.p != 0.0 && (f.a0 != 0.0 || f.a1 != 0.0))
        v *= std::pow(std::abs(f.a0 * y0 + f.a1 * y1 + f.b), f.p);
    return v;
  };

  const double two_pi = 2.0 * std::numbers::pi;
  double inner_max = 0.0;
  // Circles of radius below 1e-6 r hold a share of order 1e-12 of the disc;
  // tanh-sinh samples many of them and each costs a full angular pass.
  auto angular = [&](double rho) {
    if (rho <= 1e-6 * r) return 0.0;
    std::vector<double> cuts{0.0, two_pi};
    for (const auto& l : lines) {
      const double an = std::hypot(l.a0, l.a1);
      const double q = -(l.a0 * c0 + l.a1 * c1 + l.b) / rho;
      if (std::abs(q) >= an) continue;
      const double psi = std::atan2(l.a1, l.a0);
      const double delta = std::acos(q / an);
      for (double phi : {psi + delta, psi - delta}) {
        phi = std::fmod(phi, two_pi);
        if (phi < 0.0) phi += two_pi;
        cuts.push_back(phi);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0, inner_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (!(b - a > 1e-12 * (std::abs(a) + std::abs(b) + 1e-300))) continue;
      const double mid = 0.5 * (a + b);
      if (!inside(c0 + rho * std::cos(mid), c1 + rho * std::sin(mid))) continue;
      double err = 0.0, l1 = 0.0;
      total += integrator().integrate(
          [&](double phi) { return density(c0 + rho * std::cos(phi), c1 + rho * std::sin(phi)); }, a,
          b, kStopFactor * tol, &err, &l1);
      inner_err += piece_error(err, l1);
    }
    inner_max = std::max(inner_max, rho * inner_err);
    return rho * total;
  };

  std::vector<double> cuts{0.0, r};
  for (const auto& l : lines) {
    const double an = std::hypot(l.a0, l.a1);
    const double dist = std::abs(l.a0 * c0 + l.a1 * c1 + l.b) / an;
    if (dist > 0.0 && dist < r) cuts.push_back(dist);
  }
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& u = lines[i];
      const auto& v = lines[j];
      const double det = u.a0 * v.a1 - u.a1 * v.a0;
      if (std::abs(det) < 1e-14) continue;
      const double x0 = (-u.b * v.a1 + v.b * u.a1) / det;
      const double x1 = (-u.a0 * v.b + v.a0 * u.b) / det;
      const double dist = std::hypot(x0 - c0, x1 - c1);
      if (dist > 0.0 && dist < r) cuts.push_back(dist);
    }
  ErrorTally outer;
  const double value = integrate_pieces(angular, cuts, tol, outer);
  abs_err = outer.abs_err + r * inner_max;
  return value;
}

double interval_integral(double c, double r, const std::vector<Affine2>& factors,
                         const std::vector<Affine2>& walls, double tol, double& abs_err) {
  abs_err = 0.0;
  std::vector<double> cuts{c - r, c + r};
  for (const auto& f : factors)
    if (f.a0 != 0.0) {
      const double z = -f.b / f.a0;
      if (z > c - r && z < c + r) cuts.push_back(z);
    }
  for (const auto& w : walls)
    if (w.a0 != 0.0) {
      const double z = -w.b / w.a0;
      if (z > c - r && z < c + r) cuts.push_back(z);
    }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b - a > 1e-12 * (std::abs(a) + std::abs(b) + 1e-300))) continue;
    const double mid = 0.5 * (a + b);
    bool ok = true;
    for (const auto& w : walls)
      if (w.a0 * mid + w.b < 0.0) ok = false;
    if (!ok) continue;
    double err = 0.0, l1 = 0.0;
    total += integrator().integrate(
        [&](double y) {
          double v = 1.0;
          for (const auto& f : factors)
            if (f.p != 0.0) v *= std::pow(std::abs(f.a0 * y + f.b), f.p);
          return v;
        },
        a, b, kStopFactor * tol, &err, &l1);
    abs_err += piece_error(err, l1);
  }
  return total;
}

struct Factor3 {
  Vec a;
  double p;
};

// Weight and chamber walls that only involve single coordinates, as for
// Z2^d: the last coordinate is integrated in closed form and the others by
// nested tanh-sinh, split where the inner chords start touching a
// coordinate subspace.
struct AxisWeight {
  double p = 0.0;
  double scale = 1.0;
  int wall = 0;  // +1: x_j >= 0, -1: x_j <= 0
};

double signed_power_primitive(double x, double p) {
  return std::copysign(std::pow(std::abs(x), p + 1.0), x) / (p + 1.0);
}

class AxisAlignedBall {
 public:
  AxisAlignedBall(std::vector<AxisWeight> axes, std::span<const double> c, double tol)
      : axes_(std::move(axes)), c_(c.begin(), c.end()), tol_(tol) {}

  double integrate(std::size_t j, double R2, double& abs_err) const {
    abs_err = 0.0;
    if (!(R2 > 0.0)) return 0.0;
    const auto& ax = axes_[j];
    const double h = std::sqrt(R2);
    double lo = c_[j] - h, hi = c_[j] + h;
    if (ax.wall > 0) lo = std::max(lo, 0.0);
    if (ax.wall < 0) hi = std::min(hi, 0.0);
    if (!(hi > lo)) return 0.0;
    if (j + 1 == c_.size())
      return ax.scale * (signed_power_primitive(hi, ax.p) - signed_power_primitive(lo, ax.p));

    std::vector<double> cuts{lo, hi};
    if (lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
    const std::size_t rest = c_.size() - j - 1;
    for (std::size_t mask = 1; mask < (std::size_t{1} << rest); ++mask) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < rest; ++i)
        if (mask & (std::size_t{1} << i)) d2 += c_[j + 1 + i] * c_[j + 1 + i];
      if (d2 >= R2) continue;
      const double w = std::sqrt(R2 - d2);
      for (double x : {c_[j] - w, c_[j] + w})
        if (x > lo && x < hi) cuts.push_back(x);
    }
    double inner_max = 0.0;
    auto f = [&](double x) {
      const double dx = x - c_[j];
      double e = 0.0;
      const double v = integrate(j + 1, R2 - dx * dx, e);
      inner_max = std::max(inner_max, e);
      return ax.p == 0.0 ? v : ax.scale * std::pow(std::abs(x), ax.p) * v;
    };
    ErrorTally tally;
    const double value = integrate_pieces(f, cuts, j == 0 ? tol_ : 0.1 * tol_, tally);
    abs_err = tally.abs_err + (hi - lo) * inner_max;
    return value;
  }

 private:
  std::vector<AxisWeight> axes_;
  Vec c_;
  double tol_;
};

bool single_axis(std::span<const double> a, std::size_t& axis) {
  int nonzero = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0.0) {
      axis = j;
      ++nonzero;
    }
  return nonzero == 1;
}

double ball_integral(const RootSystem& R, std::span<const double> c, double r,
                     const std::vector<Vec>& walls, double tol) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const int d = R.dimension();
  std::vector<Factor3> factors;
  const auto pos = R.positive_roots();
  for (std::size_t i = 0; i < pos.size(); ++i)
    if (R.multiplicity(i) > 0.0) factors.push_back({pos[i], 2.0 * R.multiplicity(i)});

  double value = 0.0, abs_err = 0.0;
  std::vector<AxisWeight> axes(static_cast<std::size_t>(d));
  bool aligned = true;
  for (const auto& fa : factors) {
    std::size_t j = 0;
    if (!single_axis(fa.a, j)) {
      aligned = false;
      break;
    }
    axes[j].p += fa.p;
    axes[j].scale *= std::pow(std::abs(fa.a[j]), fa.p);
  }
  for (const auto& wa : walls) {
    std::size_t j = 0;
    if (!aligned || !single_axis(wa, j)) {
      aligned = false;
      break;
    }
    axes[j].wall = wa[j] > 0.0 ? 1 : -1;
  }
  if (aligned && d > 1) {
    value = AxisAlignedBall(std::move(axes), c, tol).integrate(0, r * r, abs_err);
  } else if (d == 1) {
    std::vector<Affine2> f, w;
    for (const auto& fa : factors) f.push_back({fa.a[0], 0.0, 0.0, fa.p});
    for (const auto& wa : walls) w.push_back({wa[0], 0.0, 0.0, 0.0});
    value = interval_integral(c[0], r, f, w, tol, abs_err);
  } else if (d == 2) {
    std::vector<Affine2> f, w;
    for (const auto& fa : factors) f.push_back({fa.a[0], fa.a[1], 0.0, fa.p});
    for (const auto& wa : walls) w.push_back({wa[0], wa[1], 0.0, 0.0});
    value = disc_integral(c[0], c[1], r, f, w, tol, abs_err);
  } else if (d == 3) {
    double slice_max = 0.0;
    auto slice = [&](double z) {
      const double rr = r * r - (z - c[2]) * (z - c[2]);
      if (rr <= 1e-12 * r * r) return 0.0;
      std::vector<Affine2> f, w;
      for (const auto& fa : factors) f.push_back({fa.a[0], fa.a[1], fa.a[2] * z, fa.p});
      for (const auto& wa : walls) w.push_back({wa[0], wa[1], wa[2] * z, 0.0});
      double e = 0.0;
      const double v = disc_integral(c[0], c[1], std::sqrt(rr), f, w, tol * 0.1, e);
      slice_max = std::max(slice_max, e);
      return v;
    };
    std::vector<double> cuts{c[2] - r, c[2], c[2] + r};
    auto add_cut = [&](double z) {
      if (z > c[2] - r && z < c[2] + r) cuts.push_back(z);
    };
    std::vector<Vec> planes;
    for (const auto& fa : factors) planes.push_back(fa.a);
    for (const auto& wa : walls) planes.push_back(wa);
    for (const auto& a : planes) {
      const double a12 = std::hypot(a[0], a[1]);
      if (a12 < 1e-14) {
        if (a[2] != 0.0) add_cut(0.0);
        continue;
      }
      // Tangency of the line {a12 . y + a2 z = 0} with the slice circle:
      // (A + a2 z)^2 = a12^2 (r^2 - (z - c2)^2), A = a0 c0 + a1 c1.
      const double A = a[0] * c[0] + a[1] * c[1];
      const double qa = a[2] * a[2] + a12 * a12;
      const double qb = 2.0 * A * a[2] - 2.0 * a12 * a12 * c[2];
      const double qc = A * A - a12 * a12 * (r * r - c[2] * c[2]);
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc > 0.0) {
        const double s = std::sqrt(disc);
        add_cut((-qb - s) / (2.0 * qa));
        add_cut((-qb + s) / (2.0 * qa));
      }
      if (a[2] != 0.0) add_cut(-A / a[2]);
    }
    ErrorTally outer;
    value = integrate_pieces(slice, cuts, tol, outer);
    abs_err = outer.abs_err + 2.0 * r * slice_max;
  } else {
    throw std::invalid_argument("ball volumes are supported for d <= 3");
  }
  const double achieved = value > 0.0 ? abs_err / value : abs_err;
  if (achieved > tol) throw QuadratureError("ball volume: tolerance not reached", value, achieved);
  return value;
}

}  // namespace

double ball_volume(const RootSystem& R, std::span<const double> x, double r, double tolerance) {
  return ball_integral(R, x, r, {}, tolerance);
}

double orbit_ball_volume(const RootSystem& R, const WeylGroup& G, std::span<const double> x,
                         double r, double tolerance) {
  const Vec xp = chamber_representative(R, x);
  std::vector<Vec> walls(R.positive_roots().begin(), R.positive_roots().end());
  return static_cast<double>(G.order()) * ball_integral(R, xp, r, walls, tolerance);
}

}  // namespace dunkl
