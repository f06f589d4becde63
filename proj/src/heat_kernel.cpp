#include "dunkl/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#define BOOST_DISABLE_ASSERTS
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace dunkl {

HeatKernelModel::HeatKernelModel(const RootSystem& R, DerivativeConfig cfg) : cfg_(cfg) {
  if (!R.is_z2_product())
    throw std::invalid_argument("explicit heat kernels are available for Z2^d root systems only");
  k_ = R.axis_multiplicities();
  if (!(cfg_.h_rel > 0.0 && cfg_.h_rel <= 0.1)) throw std::invalid_argument("h_rel must lie in (0, 0.1]");
  if (cfg_.richardson_levels < 0 || cfg_.richardson_levels > 4)
    throw std::invalid_argument("richardson_levels must lie in [0, 4]");
}

HeatKernelModel::HeatKernelModel(std::vector<double> axis_multiplicities, DerivativeConfig cfg)
    : k_(std::move(axis_multiplicities)), cfg_(cfg) {
  if (k_.empty()) throw std::invalid_argument("at least one axis");
  for (double k : k_)
    if (!(k >= 0.0)) throw std::invalid_argument("multiplicities must be nonnegative");
  if (!(cfg_.h_rel > 0.0 && cfg_.h_rel <= 0.1)) throw std::invalid_argument("h_rel must lie in (0, 0.1]");
  if (cfg_.richardson_levels < 0 || cfg_.richardson_levels > 4)
    throw std::invalid_argument("richardson_levels must lie in [0, 4]");
}

// ---------------------------------------------------------------------------
// Rank-one kernel

namespace {

constexpr double kLn2 = std::numbers::ln2;

void silence_gsl() {
  static const bool done = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)done;
}

// e^{-z} I_nu(z) for nu > -1, z > 0.
double scaled_bessel_i(double nu, double z) {
  gsl_sf_result r;
  if (nu >= 0.0) {
    if (gsl_sf_bessel_Inu_scaled_e(nu, z, &r) != GSL_SUCCESS)
      throw std::runtime_error("Bessel I evaluation failed");
    return r.val;
  }
  const double mu = -nu;
  gsl_sf_result k;
  if (gsl_sf_bessel_Inu_scaled_e(mu, z, &r) != GSL_SUCCESS ||
      gsl_sf_bessel_Knu_scaled_e(mu, z, &k) != GSL_SUCCESS)
    throw std::runtime_error("Bessel I evaluation failed");
  return r.val + 2.0 / std::numbers::pi * std::sin(mu * std::numbers::pi) * std::exp(-2.0 * z) * k.val;
}

constexpr double kAsymptoticFrom = 25.0;

// e^{-z}(I_{k-1/2}(z) + s I_{k+1/2}(z)), s = +-1.
double bessel_bracket(double k, double z, double s) {
  if (z < kAsymptoticFrom) {
    silence_gsl();
    return scaled_bessel_i(k - 0.5, z) + s * scaled_bessel_i(k + 0.5, z);
  }
  // Large-argument expansion; the two orders are differenced term by term
  // so that the s = -1 case keeps its relative accuracy.
  const double mu1 = 4.0 * (k - 0.5) * (k - 0.5);
  const double mu2 = 4.0 * (k + 0.5) * (k + 0.5);
  double a1 = 1.0, a2 = 1.0, sum = 1.0 + s, scale = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n < 200; ++n) {
    const double odd = (2.0 * n - 1.0) * (2.0 * n - 1.0);
    a1 *= (mu1 - odd) / (8.0 * n);
    a2 *= (mu2 - odd) / (8.0 * n);
    scale /= -z;
    const double term = scale * (a1 + s * a2);
    const double size = std::abs(scale) * std::max(std::abs(a1), std::abs(a2));
    if (size > prev) break;
    sum += term;
    prev = size;
    if (size < 1e-17 * std::abs(sum) || size == 0.0) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double kernel_rank1(double k, double t, double x, double y) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (!(k >= 0.0)) throw std::invalid_argument("kernel: k must be nonnegative");
  if (k == 0.0) {
    const double d = x - y;
    return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
  }
  const double z = x * y / (2.0 * t);
  const double az = std::abs(z);
  const double log_front = -(2.0 * k + 0.5) * kLn2 - (k + 0.5) * std::log(2.0 * t);
  if (az <= 2.0) {
    // Power series of the normalized Bessel functions; z carries the sign.
    const double q = 0.25 * z * z;
    double A = 1.0, B = 1.0, ta = 1.0, tb = 1.0;
    for (int n = 1; n < 60; ++n) {
      ta *= q / (n * (k + 0.5 + n - 1.0));
      tb *= q / (n * (k + 1.5 + n - 1.0));
      A += ta;
      B += tb;
      if (ta < 1e-17 * A && tb < 1e-17 * B) break;
    }
    const double bracket = A + z / (2.0 * k + 1.0) * B;
    return std::exp(log_front - std::lgamma(k + 0.5) - (x * x + y * y) / (4.0 * t)) * bracket;
  }
  const double s = z > 0.0 ? 1.0 : -1.0;
  const double gap = std::abs(x) - std::abs(y);
  const double log_scale = log_front + (0.5 - k) * std::log(0.5 * az) - gap * gap / (4.0 * t);
  return std::exp(log_scale) * bessel_bracket(k, az, s);
}

double kernel(const HeatKernelModel& model, double t, std::span<const double> x,
              std::span<const double> y) {
  const auto k = model.multiplicities();
  if (x.size() != k.size() || y.size() != k.size())
    throw std::invalid_argument("kernel: point dimension does not match the model");
  double v = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) v *= kernel_rank1(k[j], t, x[j], y[j]);
  return v;
}

// ---------------------------------------------------------------------------
// Time derivatives

namespace {

// Central differences for the m-th derivative in units of the step.
std::map<int, double> central_difference(int m) {
  switch (m) {
    case 0: return {{0, 1.0}};
    case 1: return {{-1, -0.5}, {1, 0.5}};
    case 2: return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    case 3: return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
    case 4: return {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
    default: throw std::invalid_argument("time derivative order must lie in [0, 4]");
  }
}

using Rule = std::map<long, double>;  // offset in units of h_rel * 2^-levels -> weight

Rule combine(const Rule& a, double ca, const Rule& b, double cb) {
  Rule out;
  for (const auto& [o, w] : a) out[o] += ca * w;
  for (const auto& [o, w] : b) out[o] += cb * w;
  return out;
}

TimeStencil to_stencil(const Rule& rule, double unit) {
  TimeStencil s;
  for (const auto& [o, w] : rule) {
    if (w == 0.0) continue;
    s.offsets.push_back(static_cast<double>(o) * unit);
    s.weights.push_back(w);
  }
  return s;
}

}  // namespace

DerivativeStencils time_derivative_stencils(int m, const DerivativeConfig& cfg) {
  if (m < 0 || m > kMaxTimeDerivative)
    throw std::invalid_argument("time derivative order must lie in [0, 4] (accuracy budget)");
  if (m == 0) {
    TimeStencil id{{0.0}, {1.0}};
    return {id, id};
  }
  const int L = cfg.richardson_levels;
  const double unit = cfg.h_rel / static_cast<double>(1L << L);
  const auto base = central_difference(m);
  // Difference quotient with step h_rel * 2^-level, level >= -1.
  auto level_rule = [&](int level) {
    const long stride = 1L << (L - level);
    const double step = cfg.h_rel * std::pow(2.0, -level);
    Rule r;
    for (const auto& [j, c] : base) r[j * stride] += c / std::pow(step, m);
    return r;
  };
  // Richardson table on h^2 expansions: T[l][q] with l the finest level used.
  std::vector<std::vector<Rule>> T;
  for (int l = -1; l <= L; ++l) {
    std::vector<Rule> row{level_rule(l)};
    if (l > -1) {
      const auto& prev = T.back();
      for (int q = 1; q <= l + 1 && q <= L; ++q) {
        const double f = std::pow(4.0, q);
        row.push_back(combine(row[static_cast<std::size_t>(q - 1)], f / (f - 1.0),
                              prev[static_cast<std::size_t>(q - 1)], -1.0 / (f - 1.0)));
      }
    }
    T.push_back(std::move(row));
  }
  const auto& finest = T.back();
  const auto& coarser = T[T.size() - 2];
  DerivativeStencils out;
  out.primary = to_stencil(finest[static_cast<std::size_t>(L)], unit);
  out.secondary = to_stencil(coarser[std::min<std::size_t>(static_cast<std::size_t>(L), coarser.size() - 1)], unit);
  return out;
}

DerivativeValue kernel_time_derivative(const HeatKernelModel& model, int m, double t,
                                       std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
  if (m == 0) return {kernel(model, t, x, y), 0.0};
  const auto st = time_derivative_stencils(m, model.derivative_config());
  auto apply = [&](const TimeStencil& s) {
    double v = 0.0;
    for (std::size_t i = 0; i < s.offsets.size(); ++i)
      v += s.weights[i] * kernel(model, t * (1.0 + s.offsets[i]), x, y);
    return v;
  };
  const double p = apply(st.primary);
  return {p, std::abs(p - apply(st.secondary))};
}

// ---------------------------------------------------------------------------
// Mass

namespace {

using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& mass_integrator() {
  thread_local tanh_sinh<double> ts(15);
  return ts;
}

}  // namespace

double kernel_mass(const HeatKernelModel& model, double t, std::span<const double> x,
                   double tolerance) {
  const std::size_t d = static_cast<std::size_t>(model.dimension());
  if (x.size() != d) throw std::invalid_argument("kernel_mass: dimension mismatch");
  Vec y(d, 0.0);
  const auto k = model.multiplicities();
  const Vec xv(x.begin(), x.end());
  // Nested integration in y_0, ..., y_{d-1}; each level is split at 0 and
  // at +-|x_j| and truncated where the Gaussian factor is below e^-400.
  std::function<double(std::size_t)> level = [&](std::size_t j) -> double {
    const double a = std::abs(xv[j]);
    const double B = a + 40.0 * std::sqrt(t);
    std::vector<double> cuts{-B, 0.0, B};
    if (a > 0.0) {
      cuts.push_back(-a);
      cuts.push_back(a);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      if (!(hi > lo)) continue;
      auto f = [&](double u) {
        y[j] = u;  // deeper levels only write later slots
        const double w = std::pow(2.0, k[j]) * std::pow(std::abs(u), 2.0 * k[j]);
        double v;
        if (j + 1 == d)
          v = kernel(model, t, xv, y);
        else
          v = level(j + 1);
        return w * v;
      };
      total += mass_integrator().integrate(f, lo, hi, tolerance);
    }
    return total;
  };
  return level(0);
}

// ---------------------------------------------------------------------------
// Dunkl Laplacian on grids

LaplacianResult dunkl_laplacian(const RootSystem& R, const SampledFunction& f) {
  const auto& grid = *f.grid();
  const int d = grid.dimension();
  if (R.dimension() != d) throw std::invalid_argument("dunkl_laplacian: dimension mismatch");
  const std::size_t N = grid.size();
  const auto axes = grid.axes();
  const auto v = f.values();

  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int j = d - 2; j >= 0; --j)
    stride[static_cast<std::size_t>(j)] =
        stride[static_cast<std::size_t>(j + 1)] * axes[static_cast<std::size_t>(j + 1)].nodes.size();

  const auto pos = R.positive_roots();
  struct Reflection {
    std::size_t root;
    std::vector<std::size_t> image;
  };
  std::vector<Reflection> refl;
  for (std::size_t r = 0; r < pos.size(); ++r) {
    if (R.multiplicity(r) == 0.0) continue;
    Reflection rf{r, std::vector<std::size_t>(N)};
    for (std::size_t i = 0; i < N; ++i) {
      const Vec img = reflect(pos[r], grid.node(i));
      const std::size_t idx = grid.find_node(img);
      if (idx == WeightedGrid::npos)
        throw std::invalid_argument("dunkl_laplacian: grid node set is not invariant under the reflections");
      rf.image[i] = idx;
    }
    refl.push_back(std::move(rf));
  }

  std::vector<double> out(N, 0.0);
  std::vector<bool> interior(N, true);
  std::vector<double> grad(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < N; ++i) {
    const auto idx = grid.multi_index(i);
    const auto x = grid.node(i);
    double lap = 0.0;
    double max_width = 0.0;
    bool ok = true;
    for (int j = 0; j < d; ++j) {
      const auto& ax = axes[static_cast<std::size_t>(j)];
      const std::size_t m = idx[static_cast<std::size_t>(j)];
      max_width = std::max(max_width, ax.widths[m]);
      if (m == 0 || m + 1 == ax.nodes.size()) {
        ok = false;
        grad[static_cast<std::size_t>(j)] = 0.0;
        continue;
      }
      const std::size_t s = stride[static_cast<std::size_t>(j)];
      const double hm = ax.nodes[m] - ax.nodes[m - 1];
      const double hp = ax.nodes[m + 1] - ax.nodes[m];
      const double fm = v[i - s], f0 = v[i], fp = v[i + s];
      lap += 2.0 * (fp / (hp * (hp + hm)) - f0 / (hp * hm) + fm / (hm * (hp + hm)));
      grad[static_cast<std::size_t>(j)] =
          (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) / (hp * hm * (hp + hm));
    }
    if (!ok) {
      interior[i] = false;
      continue;
    }
    for (const auto& rf : refl) {
      const auto& alpha = pos[rf.root];
      const double ax = dot(alpha, x);
      const double a2 = dot(alpha, alpha);
      const double k = R.multiplicity(rf.root);
      lap += k * (2.0 * dot(grad, alpha) / ax - a2 * (v[i] - v[rf.image[i]]) / (ax * ax));
      if (std::abs(ax) / std::sqrt(a2) < max_width) interior[i] = false;
    }
    out[i] = lap;
  }
  return {SampledFunction(f.grid(), std::move(out)), std::move(interior)};
}

// ---------------------------------------------------------------------------
// Bound fits

double ball_volume_max(const RootSystem& R, std::span<const double> x, std::span<const double> y,
                       double r) {
  return std::max(ball_volume(R, x, r), ball_volume(R, y, r));
}

KernelBoundFit fit_gaussian_bound(const HeatKernelModel& model, const RootSystem& R,
                                  const WeylGroup& G, int m, std::span<const KernelSample> sample,
                                  double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("fit_gaussian_bound: c must be nonnegative");
  std::vector<double> ratio(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    const auto& s = sample[i];
    const double val = std::abs(kernel_time_derivative(model, m, s.t, s.x, s.y).value);
    const double V = ball_volume_max(R, s.x, s.y, std::sqrt(s.t));
    const double rho = orbit_distance(G, s.x, s.y);
    ratio[i] = val * V * std::exp(c * rho * rho / s.t);
  });
  KernelBoundFit fit;
  fit.c = c;
  fit.m = m;
  fit.samples = sample.size();
  for (std::size_t i = 0; i < ratio.size(); ++i)
    if (ratio[i] > fit.C) {
      fit.C = ratio[i];
      fit.argmax = i;
    }
  return fit;
}

KernelBoundFit fit_lipschitz_bound(const HeatKernelModel& model, const RootSystem& R,
                                   const WeylGroup& G, int m,
                                   std::span<const LipschitzSample> sample, double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("fit_lipschitz_bound: c must be nonnegative");
  std::vector<double> ratio(sample.size(), 0.0);
  parallel_for(sample.size(), [&](std::size_t i) {
    const auto& s = sample[i];
    const double dyz = distance(s.y, s.z);
    if (!(dyz > 0.0) || dyz >= std::sqrt(s.t)) return;
    const double a = kernel_time_derivative(model, m, s.t, s.x, s.y).value;
    const double b = kernel_time_derivative(model, m, s.t, s.x, s.z).value;
    const double V = ball_volume_max(R, s.x, s.y, std::sqrt(s.t));
    const double rho = orbit_distance(G, s.x, s.y);
    ratio[i] = std::abs(a - b) * std::sqrt(s.t) / dyz * V * std::exp(c * rho * rho / s.t);
  });
  KernelBoundFit fit;
  fit.c = c;
  fit.m = m;
  fit.samples = sample.size();
  for (std::size_t i = 0; i < ratio.size(); ++i)
    if (ratio[i] > fit.C) {
      fit.C = ratio[i];
      fit.argmax = i;
    }
  return fit;
}

std::vector<KernelSample> scaled_kernel_sample(int dimension, std::span<const double> times,
                                               double span, int points_per_axis) {
  if (dimension < 1 || points_per_axis < 2) throw std::invalid_argument("scaled_kernel_sample: bad lattice");
  const auto u = linspace(-span, span, static_cast<std::size_t>(points_per_axis));
  const std::size_t d = static_cast<std::size_t>(dimension);
  std::size_t cells = 1;
  for (std::size_t j = 0; j < d; ++j) cells *= u.size();
  std::vector<KernelSample> out;
  for (double t : times) {
    const double s = std::sqrt(t);
    for (std::size_t a = 0; a < cells; ++a)
      for (std::size_t b = 0; b < cells; ++b) {
        KernelSample ks{t, Vec(d), Vec(d)};
        std::size_t ra = a, rb = b;
        for (std::size_t j = 0; j < d; ++j) {
          ks.x[j] = s * u[ra % u.size()];
          ks.y[j] = s * u[rb % u.size()];
          ra /= u.size();
          rb /= u.size();
        }
        out.push_back(std::move(ks));
      }
  }
  return out;
}

}  // namespace dunkl
