#include "dunkl/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace dunkl {

namespace {

// Exponent beyond which a kernel entry is dropped: e^-50 relative to the
// diagonal is far below every tolerance used downstream.
constexpr double kNegligibleExponent = 50.0;

}  // namespace

HeatSemigroup::HeatSemigroup(HeatKernelModel model, GridPtr grid)
    : model_(std::move(model)), grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("HeatSemigroup: null grid");
  const auto& R = grid_->root_system();
  if (!R.is_z2_product()) throw std::invalid_argument("HeatSemigroup: grid root system must be Z2^d");
  const auto k = R.axis_multiplicities();
  if (static_cast<int>(k.size()) != model_.dimension())
    throw std::invalid_argument("HeatSemigroup: model and grid dimensions differ");
  for (std::size_t j = 0; j < k.size(); ++j)
    if (std::abs(k[j] - model_.multiplicities()[j]) > 1e-12)
      throw std::invalid_argument("HeatSemigroup: model and grid multiplicities differ");
}

std::vector<double> HeatSemigroup::axis_matrix(std::size_t axis, double t) const {
  const auto& ax = grid_->axes()[axis];
  const double k = model_.multiplicities()[axis];
  const std::size_t n = ax.nodes.size();
  std::vector<double> colw(n);
  for (std::size_t b = 0; b < n; ++b)
    colw[b] = ax.widths[b] * (k == 0.0 ? 1.0 : std::pow(2.0, k) * std::pow(std::abs(ax.nodes[b]), 2.0 * k));
  std::vector<double> K(n * n, 0.0);
  // Nodes are symmetric about 0 and T_t(-x,-y) = T_t(x,y): fill the upper
  // half of the rows and mirror.
  const std::size_t half = n / 2;
  parallel_for(n - half, [&](std::size_t r) {
    const std::size_t a = half + r;
    const double x = ax.nodes[a];
    for (std::size_t b = 0; b < n; ++b) {
      const double y = ax.nodes[b];
      const double gap = std::abs(x) - std::abs(y);
      if (gap * gap / (4.0 * t) > kNegligibleExponent) continue;
      K[a * n + b] = kernel_rank1(k, t, x, y);
    }
  });
  for (std::size_t a = 0; a < n - half; ++a)
    for (std::size_t b = 0; b < n; ++b) K[a * n + b] = K[(n - 1 - a) * n + (n - 1 - b)];
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) K[a * n + b] *= colw[b];
  return K;
}

void HeatSemigroup::apply_axis(const std::vector<double>& K, std::size_t axis,
                               std::vector<double>& data) const {
  const auto axes = grid_->axes();
  const std::size_t n = axes[axis].nodes.size();
  std::size_t inner = 1, outer = 1;
  for (std::size_t j = axis + 1; j < axes.size(); ++j) inner *= axes[j].nodes.size();
  for (std::size_t j = 0; j < axis; ++j) outer *= axes[j].nodes.size();
  std::vector<double> out(data.size(), 0.0);
  parallel_for(outer * n, [&](std::size_t oa) {
    const std::size_t o = oa / n, a = oa % n;
    double* dst = out.data() + (o * n + a) * inner;
    const double* row = K.data() + a * n;
    for (std::size_t b = 0; b < n; ++b) {
      const double w = row[b];
      if (w == 0.0) continue;
      const double* src = data.data() + (o * n + b) * inner;
      for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
    }
  });
  data.swap(out);
}

std::vector<std::vector<double>> HeatSemigroup::apply_stencil(
    const std::vector<std::vector<double>>& inputs, double t, int m) const {
  if (!(t > 0.0)) throw std::invalid_argument("semigroup: t must be positive");
  const auto st = time_derivative_stencils(m, model_.derivative_config()).primary;
  const std::size_t d = static_cast<std::size_t>(model_.dimension());
  std::vector<std::vector<double>> out(inputs.size(), std::vector<double>(grid_->size(), 0.0));
  if (d == 1) {
    // One combined matrix sum_i w_i K(t_i).
    const std::size_t n = grid_->size();
    std::vector<double> M(n * n, 0.0);
    for (std::size_t i = 0; i < st.offsets.size(); ++i) {
      const auto K = axis_matrix(0, t * (1.0 + st.offsets[i]));
      for (std::size_t q = 0; q < M.size(); ++q) M[q] += st.weights[i] * K[q];
    }
    parallel_for(inputs.size() * n, [&](std::size_t fa) {
      const std::size_t f = fa / n, a = fa % n;
      const double* row = M.data() + a * n;
      const auto& in = inputs[f];
      double s = 0.0;
      for (std::size_t b = 0; b < n; ++b) s += row[b] * in[b];
      out[f][a] = s;
    });
    return out;
  }
  for (std::size_t i = 0; i < st.offsets.size(); ++i) {
    std::vector<std::vector<double>> Ks;
    for (std::size_t j = 0; j < d; ++j) Ks.push_back(axis_matrix(j, t * (1.0 + st.offsets[i])));
    for (std::size_t f = 0; f < inputs.size(); ++f) {
      auto data = inputs[f];
      for (std::size_t j = 0; j < d; ++j) apply_axis(Ks[j], j, data);
      for (std::size_t q = 0; q < data.size(); ++q) out[f][q] += st.weights[i] * data[q];
    }
  }
  return out;
}

SampledFunction HeatSemigroup::apply(const SampledFunction& f, double t, int m) const {
  return apply_many(std::span<const SampledFunction>(&f, 1), t, m).front();
}

std::vector<SampledFunction> HeatSemigroup::apply_many(std::span<const SampledFunction> fs, double t,
                                                       int m) const {
  std::vector<std::vector<double>> inputs;
  for (const auto& f : fs) {
    if (f.grid() != grid_) throw std::invalid_argument("semigroup: function lives on a different grid");
    inputs.emplace_back(f.values().begin(), f.values().end());
  }
  auto res = apply_stencil(inputs, t, m);
  std::vector<SampledFunction> out;
  for (auto& r : res) out.emplace_back(grid_, std::move(r));
  return out;
}

Trajectories HeatSemigroup::trajectories(std::span<const SampledFunction> fs,
                                         std::span<const double> times, int m) const {
  std::vector<std::vector<double>> inputs;
  for (const auto& f : fs) {
    if (f.grid() != grid_) throw std::invalid_argument("semigroup: function lives on a different grid");
    inputs.emplace_back(f.values().begin(), f.values().end());
  }
  Trajectories out(fs.size(), std::vector<std::vector<double>>(times.size()));
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    auto res = apply_stencil(inputs, times[ti], m);
    for (std::size_t f = 0; f < fs.size(); ++f) out[f][ti] = std::move(res[f]);
  }
  return out;
}

std::vector<double> HeatSemigroup::row_mass(double t) const {
  std::vector<std::vector<double>> one{std::vector<double>(grid_->size(), 1.0)};
  return apply_stencil(one, t, 0).front();
}

}  // namespace dunkl
