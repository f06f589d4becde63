#include "dunkl/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace dunkl {

BallFamily lattice_ball_family(int dimension, double extent, std::size_t centers_per_axis,
                               double r_min, std::size_t scales) {
  if (dimension < 1) throw std::invalid_argument("ball family: dimension must be positive");
  if (centers_per_axis < 1 || scales < 1 || !(r_min > 0.0) || !(extent >= 0.0))
    throw std::invalid_argument("ball family: need centers >= 1, scales >= 1, r_min > 0, extent >= 0");
  const auto axis = centers_per_axis == 1 ? std::vector<double>{0.0}
                                          : linspace(-extent, extent, centers_per_axis);
  std::size_t total = 1;
  for (int j = 0; j < dimension; ++j) total *= centers_per_axis;
  BallFamily fam;
  fam.policy = "lattice " + std::to_string(centers_per_axis) + "^" + std::to_string(dimension) +
               " on [-" + std::to_string(extent) + "," + std::to_string(extent) + "], radii " +
               std::to_string(r_min) + "*2^j, j<" + std::to_string(scales);
  for (std::size_t s = 0; s < scales; ++s) {
    const double r = r_min * std::ldexp(1.0, static_cast<int>(s));
    for (std::size_t c = 0; c < total; ++c) {
      Vec x(static_cast<std::size_t>(dimension));
      std::size_t rem = c;
      for (int j = dimension - 1; j >= 0; --j) {
        x[static_cast<std::size_t>(j)] = axis[rem % centers_per_axis];
        rem /= centers_per_axis;
      }
      fam.balls.push_back({std::move(x), r});
    }
  }
  return fam;
}

namespace {

using Membership = std::function<bool(const Ball&, std::span<const double>)>;

// Mean oscillation type functional over every admissible ball, maximised.
template <class Functional>
NormValue ball_sup(const SampledFunction& f, const BallFamily& family, const Membership& inside,
                   Functional&& functional) {
  const auto& grid = *f.grid();
  const auto w = grid.quad_weights();
  const auto v = f.values();
  const std::size_t nb = family.balls.size();
  std::vector<double> score(nb, -1.0);
  parallel_for(nb, [&](std::size_t b) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (inside(family.balls[b], grid.node(i))) nodes.push_back(i);
    if (nodes.size() < kMinBallNodes) return;
    score[b] = functional(nodes, v, w);
  });
  NormValue out;
  bool any = false;
  for (std::size_t b = 0; b < nb; ++b) {
    if (score[b] < 0.0) continue;
    ++out.admissible;
    if (!any || score[b] > out.value) {
      out.value = score[b];
      out.argmax = b;
      any = true;
    }
  }
  if (!any)
    throw std::invalid_argument("no ball of the family contains at least " +
                                std::to_string(kMinBallNodes) + " grid nodes; refine the grid or enlarge the radii");
  return out;
}

double mean_oscillation(const std::vector<std::size_t>& nodes, std::span<const double> v,
                        std::span<const double> w) {
  double mass = 0.0, integral = 0.0;
  for (std::size_t i : nodes) {
    mass += w[i];
    integral += v[i] * w[i];
  }
  const double avg = integral / mass;
  double osc = 0.0;
  for (std::size_t i : nodes) osc += std::abs(v[i] - avg) * w[i];
  return osc / mass;
}

double lower_oscillation(const std::vector<std::size_t>& nodes, std::span<const double> v,
                         std::span<const double> w) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i : nodes) lo = std::min(lo, v[i]);
  double mass = 0.0, osc = 0.0;
  for (std::size_t i : nodes) {
    mass += w[i];
    osc += (v[i] - lo) * w[i];
  }
  return osc / mass;
}

bool in_euclidean(const Ball& B, std::span<const double> x) { return distance(B.center, x) < B.radius; }

}  // namespace

NormValue bmo_norm(const SampledFunction& f, const BallFamily& family) {
  return ball_sup(f, family, in_euclidean, mean_oscillation);
}

NormValue bmo_rho_norm(const SampledFunction& f, const BallFamily& family, const WeylGroup& G) {
  return ball_sup(
      f, family,
      [&G](const Ball& B, std::span<const double> x) {
        return orbit_ball_membership(G, B.center, B.radius, x);
      },
      mean_oscillation);
}

NormValue blo_norm(const SampledFunction& f, const BallFamily& family) {
  return ball_sup(f, family, in_euclidean, lower_oscillation);
}

// ---------------------------------------------------------------------------
// Atoms

namespace {

void require_ball_in_box(const WeightedGrid& grid, const Ball& B) {
  if (static_cast<int>(B.center.size()) != grid.dimension())
    throw std::invalid_argument("atom: ball center has the wrong dimension");
  if (!(B.radius > 0.0)) throw std::invalid_argument("atom: radius must be positive");
  for (double c : B.center)
    if (std::abs(c) + B.radius > grid.half_width())
      throw std::invalid_argument("atom: ball is not contained in the grid box");
}

double weighted_lq(std::span<const double> v, std::span<const double> w, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), q) * w[i];
  return std::pow(s, 1.0 / q);
}

// phi(s) = (1 - s^2)^6 (1 + beta s^2) on |s| < 1 and its derivatives.
struct Bump {
  static constexpr int p = 6;
  double beta = 0.0;

  double value(double s) const {
    if (std::abs(s) >= 1.0) return 0.0;
    return std::pow(1.0 - s * s, p) * (1.0 + beta * s * s);
  }
  // phi'(s) / s, regular at 0.
  double d1_over_s(double s) const {
    if (std::abs(s) >= 1.0) return 0.0;
    const double u = 1.0 - s * s;
    return -2.0 * p * std::pow(u, p - 1) * (1.0 + beta * s * s) + 2.0 * beta * std::pow(u, p);
  }
  double d1(double s) const { return s * d1_over_s(s); }
  double d2(double s) const {
    if (std::abs(s) >= 1.0) return 0.0;
    const double u = 1.0 - s * s;
    return d1_over_s(s) + 4.0 * p * (p - 1) * s * s * std::pow(u, p - 2) * (1.0 + beta * s * s) -
           8.0 * p * beta * s * s * std::pow(u, p - 1);
  }
};

// Even profile along one axis: a bump centred at 0 when the ball meets the
// hyperplane, otherwise bumps at +-|x0| (the reflection orbit of the center).
struct AxisProfile {
  Bump phi;
  bool centered = false;
  double shift = 0.0;  // |x0_j| for the off-center case
  double scale = 1.0;

  double P(double y) const {
    return centered ? phi.value(y / scale) : phi.value((std::abs(y) - shift) / scale);
  }
  double P2(double y) const {
    if (centered) return phi.d2(y / scale) / (scale * scale);
    return phi.d2((std::abs(y) - shift) / scale) / (scale * scale);
  }
  // P'(y) / y
  double P1_over_y(double y) const {
    if (centered) return phi.d1_over_s(y / scale) / (scale * scale);
    const double s = (std::abs(y) - shift) / scale;
    if (std::abs(s) >= 1.0) return 0.0;
    return phi.d1(s) / (scale * std::abs(y));
  }
};

}  // namespace

Atom make_atom_1q(const GridPtr& grid, const Ball& B, double q, std::uint64_t seed) {
  if (!grid) throw std::invalid_argument("atom: null grid");
  if (!(q > 1.0)) throw std::invalid_argument("atom: q must lie in (1, inf]");
  require_ball_in_box(*grid, B);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (distance(B.center, grid->node(i)) < B.radius) nodes.push_back(i);
  if (nodes.size() < kMinAtomNodes)
    throw std::invalid_argument("atom: ball holds " + std::to_string(nodes.size()) + " nodes, need " +
                                std::to_string(kMinAtomNodes));
  const auto w = grid->quad_weights();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> vals(grid->size(), 0.0);
  double mass = 0.0, integral = 0.0;
  for (std::size_t i : nodes) {
    vals[i] = U(rng);
    mass += w[i];
    integral += vals[i] * w[i];
  }
  const double avg = integral / mass;
  for (std::size_t i : nodes) vals[i] -= avg;

  Atom a;
  a.kind = AtomKind::one_q;
  a.ball = B;
  a.q = q;
  a.ball_volume = ball_volume(grid->root_system(), B.center, B.radius);
  const double target = 0.99 * std::pow(a.ball_volume, 1.0 / q - 1.0);
  const double nq = weighted_lq(vals, w, q);
  for (double& x : vals) x *= target / nq;
  a.values = SampledFunction(grid, std::move(vals));
  return a;
}

Atom make_atom_laplacian(const HeatKernelModel& model, const GridPtr& grid, const Ball& B,
                         std::uint64_t seed) {
  if (!grid) throw std::invalid_argument("atom: null grid");
  const auto& R = grid->root_system();
  if (!R.is_z2_product()) throw std::invalid_argument("Laplacian atoms need a Z2^d root system");
  const int d = grid->dimension();
  if (model.dimension() != d) throw std::invalid_argument("atom: model and grid dimensions differ");
  require_ball_in_box(*grid, B);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double beta = U(rng);
  const double rho = B.radius / std::sqrt(static_cast<double>(d));
  std::vector<AxisProfile> prof(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    auto& p = prof[static_cast<std::size_t>(j)];
    p.phi.beta = beta;
    const double c = std::abs(B.center[static_cast<std::size_t>(j)]);
    if (c < rho) {
      p.centered = true;
      p.scale = c + rho;
    } else {
      p.shift = c;
      p.scale = rho;
    }
  }
  const auto k = model.multiplicities();
  auto b_at = [&](std::span<const double> x) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) v *= prof[static_cast<std::size_t>(j)].P(x[static_cast<std::size_t>(j)]);
    return v;
  };
  auto a_at = [&](std::span<const double> x) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      const auto& p = prof[static_cast<std::size_t>(j)];
      const double y = x[static_cast<std::size_t>(j)];
      double term = p.P2(y) + 2.0 * k[static_cast<std::size_t>(j)] * p.P1_over_y(y);
      if (term == 0.0) continue;
      for (int i = 0; i < d; ++i)
        if (i != j) term *= prof[static_cast<std::size_t>(i)].P(x[static_cast<std::size_t>(i)]);
      s += term;
    }
    return s;
  };

  const std::size_t N = grid->size();
  std::vector<double> b(N), a(N);
  for (std::size_t i = 0; i < N; ++i) {
    b[i] = b_at(grid->node(i));
    a[i] = a_at(grid->node(i));
  }

  // Independent check of a = Delta_k b: central differences with a step far
  // below the grid spacing, reflection terms included.
  const double delta = 1e-4 * B.radius;
  double res = 0.0, amax = 0.0;
  Vec xp(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < N; ++i) {
    amax = std::max(amax, std::abs(a[i]));
    const auto x = grid->node(i);
    if (b[i] == 0.0 && a[i] == 0.0) continue;
    double lap = 0.0;
    for (int j = 0; j < d; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      std::copy(x.begin(), x.end(), xp.begin());
      xp[jj] = x[jj] + delta;
      const double fp = b_at(xp);
      xp[jj] = x[jj] - delta;
      const double fm = b_at(xp);
      xp[jj] = -x[jj];
      const double fr = b_at(xp);
      lap += (fp - 2.0 * b[i] + fm) / (delta * delta);
      lap += k[jj] * (2.0 * (fp - fm) / (2.0 * delta) / x[jj] - (b[i] - fr) / (x[jj] * x[jj]));
    }
    res = std::max(res, std::abs(lap - a[i]));
  }

  Atom at;
  at.kind = AtomKind::laplacian;
  at.ball = B;
  at.q = 2.0;
  at.M = 1;
  at.ball_volume = ball_volume(R, B.center, B.radius);
  at.residual = amax > 0.0 ? res / amax : 0.0;
  const auto w = grid->quad_weights();
  const double nb = weighted_lq(b, w, 2.0), na = weighted_lq(a, w, 2.0);
  if (!(nb > 0.0 && na > 0.0))
    throw std::invalid_argument("Laplacian atom: no grid node inside the bump support; refine the grid");
  const double vol = at.ball_volume;
  const double c = 0.99 * std::min(B.radius * B.radius / (std::sqrt(vol) * nb), 1.0 / (std::sqrt(vol) * na));
  for (auto& x : b) x *= c;
  for (auto& x : a) x *= c;
  at.values = SampledFunction(grid, std::move(a));
  at.witness = SampledFunction(grid, std::move(b));
  return at;
}

AtomCheck check_atom(const Atom& a, const WeylGroup& G) {
  const auto& grid = *a.values.grid();
  const auto w = grid.quad_weights();
  const auto v = a.values.values();
  AtomCheck c;
  auto inside = [&](std::span<const double> x) {
    return a.kind == AtomKind::one_q ? distance(a.ball.center, x) < a.ball.radius
                                     : orbit_ball_membership(G, a.ball.center, a.ball.radius, x);
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool in = inside(grid.node(i));
    if (!in && (v[i] != 0.0 || (a.witness && (*a.witness)[i] != 0.0))) c.support_ok = false;
  }
  c.mean = integrate(a.values);
  c.norm = weighted_lq(v, w, a.q);
  c.bound = std::pow(a.ball_volume, 1.0 / a.q - 1.0);
  const double slack = 1.0 + 1e-3;
  if (a.kind == AtomKind::one_q) {
    c.ok = c.support_ok && std::abs(c.mean) <= 1e-8 && c.norm <= c.bound * (1.0 + 1e-6);
    return c;
  }
  c.witness_norm = weighted_lq(a.witness->values(), w, 2.0);
  c.witness_bound = a.ball.radius * a.ball.radius * c.bound;
  c.residual = a.residual;
  c.ok = c.support_ok && c.residual <= 1e-3 && c.norm <= c.bound * slack &&
         c.witness_norm <= c.witness_bound * slack;
  return c;
}

// ---------------------------------------------------------------------------
// Calderon-Zygmund decomposition

namespace {

struct TreeConstants {
  double doubling = 0.0;
  double ball_ratio = 0.0;
  double cube_ratio = 0.0;
};

Cube root_cube(const WeightedGrid& grid) {
  Cube q;
  const auto d = static_cast<std::size_t>(grid.dimension());
  q.lo.assign(d, -grid.half_width());
  q.hi.assign(d, grid.half_width());
  q.nodes.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) q.nodes[i] = i;
  const auto w = grid.quad_weights();
  for (double x : w) q.mass += x;
  return q;
}

// Children on half-open boxes, the top face of the root box closed.
std::vector<Cube> children(const WeightedGrid& grid, const Cube& q) {
  const std::size_t d = q.lo.size();
  const auto w = grid.quad_weights();
  const std::size_t nc = std::size_t{1} << d;
  std::vector<Cube> out(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    out[c].lo = q.lo;
    out[c].hi = q.hi;
    out[c].level = q.level + 1;
    for (std::size_t j = 0; j < d; ++j) {
      const double mid = 0.5 * (q.lo[j] + q.hi[j]);
      if ((c >> j) & 1U)
        out[c].lo[j] = mid;
      else
        out[c].hi[j] = mid;
    }
  }
  for (std::size_t i : q.nodes) {
    const auto x = grid.node(i);
    std::size_t c = 0;
    for (std::size_t j = 0; j < d; ++j)
      if (x[j] >= 0.5 * (q.lo[j] + q.hi[j])) c |= std::size_t{1} << j;
    out[c].nodes.push_back(i);
    out[c].mass += w[i];
  }
  return out;
}

Ball circumscribed(const Cube& q) {
  Ball b;
  b.center.resize(q.lo.size());
  double r2 = 0.0;
  for (std::size_t j = 0; j < q.lo.size(); ++j) {
    b.center[j] = 0.5 * (q.lo[j] + q.hi[j]);
    const double h = 0.5 * (q.hi[j] - q.lo[j]);
    r2 += h * h;
  }
  b.radius = std::sqrt(r2);
  return b;
}

TreeConstants tree_constants(const GridPtr& grid) {
  static std::mutex mu;
  static std::map<const WeightedGrid*, std::pair<std::weak_ptr<const WeightedGrid>, TreeConstants>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(grid.get());
    if (it != cache.end() && !it->second.first.expired()) return it->second.second;
  }
  std::vector<Cube> all;
  TreeConstants tc;
  std::vector<Cube> stack{root_cube(*grid)};
  while (!stack.empty()) {
    Cube q = std::move(stack.back());
    stack.pop_back();
    if (q.nodes.size() > 1) {
      for (auto& c : children(*grid, q)) {
        if (c.nodes.empty()) continue;
        tc.doubling = std::max(tc.doubling, q.mass / c.mass);
        stack.push_back(std::move(c));
      }
    }
    q.nodes.clear();
    q.nodes.shrink_to_fit();
    all.push_back(std::move(q));
  }
  std::vector<double> ratio(all.size());
  const auto& R = grid->root_system();
  parallel_for(all.size(), [&](std::size_t i) {
    const Ball b = circumscribed(all[i]);
    ratio[i] = ball_volume(R, b.center, b.radius) / all[i].mass;
  });
  for (double r : ratio) {
    tc.ball_ratio = std::max(tc.ball_ratio, r);
    tc.cube_ratio = std::max(tc.cube_ratio, 1.0 / r);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[grid.get()] = {grid, tc};
  return tc;
}

}  // namespace

CZDecomposition cz_decompose(const SampledFunction& f, double lambda) {
  const GridPtr& gp = f.grid();
  const auto& grid = *gp;
  const auto w = grid.quad_weights();
  const auto v = f.values();
  const std::size_t N = grid.size();
  const int d = grid.dimension();

  Cube root = root_cube(grid);
  double l1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) l1 += std::abs(v[i]) * w[i];
  const double global_avg = l1 / root.mass;
  if (!(lambda > global_avg))
    throw std::invalid_argument("cz_decompose: lambda = " + std::to_string(lambda) +
                                " must exceed the average of |f| over the box (" +
                                std::to_string(global_avg) + ")");

  auto avg_abs = [&](const Cube& q) {
    double s = 0.0;
    for (std::size_t i : q.nodes) s += std::abs(v[i]) * w[i];
    return s / q.mass;
  };

  CZDecomposition cz;
  cz.lambda = lambda;
  cz.alpha_star = 2.0 * std::sqrt(static_cast<double>(d));
  std::vector<Cube> stack{std::move(root)};
  while (!stack.empty()) {
    Cube q = std::move(stack.back());
    stack.pop_back();
    if (q.nodes.size() <= 1) continue;
    for (auto& c : children(grid, q)) {
      if (c.nodes.empty()) continue;
      if (avg_abs(c) > lambda)
        cz.cubes.push_back(std::move(c));
      else
        stack.push_back(std::move(c));
    }
  }
  // Deterministic order: by level, then lower corner.
  std::sort(cz.cubes.begin(), cz.cubes.end(), [](const Cube& a, const Cube& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.lo < b.lo;
  });

  std::vector<double> g(v.begin(), v.end());
  std::vector<double> recon(N, 0.0);
  for (const auto& q : cz.cubes) {
    double s = 0.0;
    for (std::size_t i : q.nodes) s += v[i] * w[i];
    const double avg = s / q.mass;
    BadPart b;
    b.nodes = q.nodes;
    double bl1 = 0.0, bint = 0.0;
    for (std::size_t i : q.nodes) {
      const double val = v[i] - avg;
      b.values.push_back(val);
      g[i] = avg;
      recon[i] += val;
      bl1 += std::abs(val) * w[i];
      bint += val * w[i];
    }
    cz.max_bad_mean = std::max(cz.max_bad_mean, std::abs(bint) / (lambda * q.mass));
    cz.bad.push_back(std::move(b));
    Ball ball = circumscribed(q);
    Ball dil = ball;
    dil.radius *= cz.alpha_star;
    cz.balls.push_back(ball);
    cz.dilated.push_back(dil);
  }
  cz.ball_volumes.resize(cz.balls.size());
  const auto& R = grid.root_system();
  parallel_for(cz.balls.size(), [&](std::size_t i) {
    cz.ball_volumes[i] = ball_volume(R, cz.balls[i].center, cz.balls[i].radius);
  });

  double ginf = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    recon[i] += g[i];
    cz.identity_error = std::max(cz.identity_error, std::abs(v[i] - recon[i]));
    ginf = std::max(ginf, std::abs(g[i]));
  }
  cz.good_constant = ginf / lambda;
  double vol_sum = 0.0;
  for (std::size_t c = 0; c < cz.bad.size(); ++c) {
    const auto& b = cz.bad[c];
    double bl1 = 0.0;
    for (std::size_t p = 0; p < b.nodes.size(); ++p) {
      bl1 += std::abs(b.values[p]) * w[b.nodes[p]];
      if (!(distance(cz.dilated[c].center, grid.node(b.nodes[p])) < cz.dilated[c].radius))
        cz.support_ok = false;
    }
    cz.bad_constant = std::max(cz.bad_constant, bl1 / (lambda * cz.ball_volumes[c]));
    vol_sum += cz.ball_volumes[c];
  }
  cz.ball_constant = l1 > 0.0 ? lambda * vol_sum / l1 : 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t count = 0;
    const auto x = grid.node(i);
    for (const auto& B : cz.dilated)
      if (distance(B.center, x) < B.radius) ++count;
    cz.max_overlap = std::max(cz.max_overlap, count);
  }
  cz.good = SampledFunction(gp, std::move(g));

  const auto tc = tree_constants(gp);
  cz.doubling_constant = tc.doubling;
  cz.ball_cube_ratio = tc.ball_ratio;
  cz.cube_ball_ratio = tc.cube_ratio;
  return cz;
}

CZCheck check_cz(const CZDecomposition& cz) {
  const double slack = 1.0 + 1e-9;
  double fmax = 0.0;
  for (double x : cz.good.values()) fmax = std::max(fmax, std::abs(x));
  for (const auto& b : cz.bad)
    for (double x : b.values) fmax = std::max(fmax, std::abs(x));
  CZCheck c;
  c.identity = cz.identity_error <= 1e-10 * std::max(1.0, fmax);
  c.good_bounded = cz.good_constant <= cz.doubling_constant * slack;
  c.supports = cz.support_ok && cz.max_overlap <= kOverlapLimit;
  c.bad_bounded = cz.bad_constant <= 2.0 * cz.doubling_constant * cz.cube_ball_ratio * slack && cz.max_bad_mean <= 1e-10;
  c.balls_bounded = cz.ball_constant <= cz.ball_cube_ratio * slack;
  return c;
}

}  // namespace dunkl
