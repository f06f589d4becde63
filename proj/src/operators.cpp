#include "dunkl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dunkl {

TimeGrid TimeGrid::from(std::vector<double> times) {
  if (times.size() < 2) throw std::invalid_argument("time grid needs at least 2 times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("time grid: times must be positive");
    if (i > 0 && !(times[i] < times[i - 1]))
      throw std::invalid_argument("time grid: times must be strictly decreasing");
  }
  return TimeGrid{std::move(times)};
}

TimeGrid TimeGrid::log_uniform(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0 && t_max > t_min)) throw std::invalid_argument("time grid: need 0 < t_min < t_max");
  auto t = logspace(t_min, t_max, count);
  std::reverse(t.begin(), t.end());
  return from(std::move(t));
}

OscillationBrackets make_brackets(const TimeGrid& grid, std::vector<double> edges) {
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] < edges[i - 1])) throw std::invalid_argument("bracket edges must be strictly decreasing");
  OscillationBrackets b;
  b.edges = edges;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    std::vector<std::size_t> mem;
    const double hi = edges[j], lo = edges[j + 1];
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
      const double t = grid.times[i];
      const double tol = 1e-12 * t;
      if (t <= hi + tol && t >= lo - tol) mem.push_back(i);
    }
    b.members.push_back(std::move(mem));
  }
  return b;
}

OscillationBrackets strided_brackets(const TimeGrid& grid, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("bracket stride must be positive");
  std::vector<double> edges;
  for (std::size_t i = 0; i < grid.times.size(); i += stride) edges.push_back(grid.times[i]);
  if (edges.back() != grid.times.back()) edges.push_back(grid.times.back());
  return make_brackets(grid, std::move(edges));
}

double variation_core(std::span<const double> a, double sigma) {
  if (!(sigma >= 1.0))
    throw std::invalid_argument("variation: sigma < 1 is not supported (suffix optimality needs sigma >= 1)");
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  // best[i]: largest sum over chains starting at i.
  std::vector<double> best(n, 0.0);
  double top = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    double b = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = std::abs(a[i] - a[j]);
      if (diff == 0.0 && best[j] <= b) continue;
      const double cand = (sigma == 2.0 ? diff * diff : std::pow(diff, sigma)) + best[j];
      if (cand > b) b = cand;
    }
    best[i] = b;
    top = std::max(top, b);
  }
  return sigma == 2.0 ? std::sqrt(top) : std::pow(top, 1.0 / sigma);
}

double oscillation_core(std::span<const double> values, const OscillationBrackets& brackets) {
  double s = 0.0;
  for (const auto& mem : brackets.members) {
    if (mem.empty()) continue;
    double lo = values[mem.front()], hi = lo;
    for (std::size_t i : mem) {
      if (i >= values.size()) throw std::invalid_argument("oscillation: bracket index out of range");
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    s += (hi - lo) * (hi - lo);
  }
  return std::sqrt(s);
}

namespace {

std::size_t node_count(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  return traj.front().size();
}

std::vector<double> series(const Trajectory& traj, std::size_t node) {
  std::vector<double> s(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) s[t] = traj[t][node];
  return s;
}

}  // namespace

std::vector<double> maximal_from(const Trajectory& traj) {
  const std::size_t n = node_count(traj);
  std::vector<double> out(n, 0.0);
  for (const auto& row : traj)
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(out[i], std::abs(row[i]));
  return out;
}

std::vector<double> variation_from(const Trajectory& traj, double sigma) {
  const std::size_t n = node_count(traj);
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = variation_core(series(traj, i), sigma); });
  return out;
}

std::vector<double> oscillation_from(const Trajectory& traj, const OscillationBrackets& brackets) {
  const std::size_t n = node_count(traj);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = oscillation_core(series(traj, i), brackets);
  return out;
}

GFunctionValues gfunc_from(const Trajectory& traj, const TimeGrid& grid) {
  const std::size_t n = node_count(traj);
  const std::size_t T = grid.times.size();
  if (traj.size() != T) throw std::invalid_argument("gfunc: trajectory does not match the time grid");
  std::vector<double> logt(T);
  for (std::size_t i = 0; i < T; ++i) logt[i] = std::log(grid.times[i]);
  const double first_decade = std::log(grid.times.back()) + std::log(10.0);
  const double last_decade = std::log(grid.times.front()) - std::log(10.0);
  GFunctionValues g;
  g.values.assign(n, 0.0);
  std::vector<double> total(n, 0.0), edge(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t q = 0; q + 1 < T; ++q) {
      const double a = traj[q][i], b = traj[q + 1][i];
      const double piece = 0.5 * (a * a + b * b) * (logt[q] - logt[q + 1]);
      s += piece;
      if (logt[q] <= first_decade + 1e-12) lo += piece;
      if (logt[q + 1] >= last_decade - 1e-12) hi += piece;
    }
    total[i] = s;
    edge[i] = std::max(lo, hi);
    g.values[i] = std::sqrt(s);
  }
  const double peak = *std::max_element(total.begin(), total.end());
  for (std::size_t i = 0; i < n; ++i)
    if (total[i] > 1e-12 * peak && total[i] > 0.0)
      g.boundary_fraction = std::max(g.boundary_fraction, edge[i] / total[i]);
  g.truncation_warning = g.boundary_fraction > kBoundaryDecadeLimit;
  return g;
}

SampledFunction maximal_operator(const HeatSemigroup& S, const SampledFunction& f,
                                 const TimeGrid& grid, int m) {
  auto tr = S.trajectories(std::span<const SampledFunction>(&f, 1), grid.times, m);
  return SampledFunction(f.grid(), maximal_from(tr.front()));
}

GFunctionValues littlewood_paley_g(const HeatSemigroup& S, const SampledFunction& f, int m,
                                   const TimeGrid& grid) {
  if (m < 1) throw std::invalid_argument("g-function requires m >= 1");
  auto tr = S.trajectories(std::span<const SampledFunction>(&f, 1), grid.times, m);
  return gfunc_from(tr.front(), grid);
}

SampledFunction variation_operator(const HeatSemigroup& S, const SampledFunction& f,
                                   const TimeGrid& grid, double sigma, int m) {
  auto tr = S.trajectories(std::span<const SampledFunction>(&f, 1), grid.times, m);
  return SampledFunction(f.grid(), variation_from(tr.front(), sigma));
}

SampledFunction oscillation_operator(const HeatSemigroup& S, const SampledFunction& f,
                                     const TimeGrid& grid, const OscillationBrackets& brackets,
                                     int m) {
  auto tr = S.trajectories(std::span<const SampledFunction>(&f, 1), grid.times, m);
  return SampledFunction(f.grid(), oscillation_from(tr.front(), brackets));
}

std::vector<double> default_radii(const WeightedGrid& grid) {
  double h = grid.half_width();
  for (const auto& ax : grid.axes())
    for (std::size_t i = 1; i < ax.nodes.size(); ++i) h = std::min(h, ax.nodes[i] - ax.nodes[i - 1]);
  std::vector<double> r;
  for (double v = 2.0 * h; v <= 2.0 * grid.half_width(); v *= 2.0) r.push_back(v);
  return r;
}

namespace {

template <class Dist>
SampledFunction ball_maximal(const SampledFunction& f, std::span<const double> radii, Dist&& dist) {
  const auto& grid = *f.grid();
  const std::size_t N = grid.size();
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("maximal function: radii must be positive");
  std::vector<double> sorted_r(radii.begin(), radii.end());
  std::sort(sorted_r.begin(), sorted_r.end());
  const auto w = grid.quad_weights();
  const auto v = f.values();
  std::vector<double> out(N, 0.0);
  parallel_for(N, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> d(N);
    for (std::size_t j = 0; j < N; ++j) d[j] = {dist(grid.node(i), grid.node(j)), j};
    std::sort(d.begin(), d.end());
    // Cumulative sums in distance order; each radius reads a prefix.
    double mass = 0.0, integral = 0.0, best = 0.0;
    std::size_t p = 0;
    for (double r : sorted_r) {
      while (p < N && d[p].first < r) {
        mass += w[d[p].second];
        integral += std::abs(v[d[p].second]) * w[d[p].second];
        ++p;
      }
      if (mass > 0.0) best = std::max(best, integral / mass);
    }
    out[i] = best;
  });
  return SampledFunction(f.grid(), std::move(out));
}

}  // namespace

SampledFunction rho_maximal(const WeylGroup& G, const SampledFunction& f,
                            std::span<const double> radii) {
  return ball_maximal(f, radii, [&](std::span<const double> x, std::span<const double> y) {
    return orbit_distance(G, x, y);
  });
}

SampledFunction hl_maximal(const SampledFunction& f, std::span<const double> radii) {
  return ball_maximal(f, radii,
                      [](std::span<const double> x, std::span<const double> y) { return distance(x, y); });
}

}  // namespace dunkl
