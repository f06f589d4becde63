#include "dunkl/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dunkl {

std::string to_string(RootFamily f) {
  switch (f) {
    case RootFamily::z2_product: return "z2";
    case RootFamily::dihedral: return "dihedral";
    case RootFamily::direct_sum: return "direct_sum";
  }
  return "unknown";
}

RootFamily parse_root_family(const std::string& name) {
  if (name == "z2" || name == "Z2" || name == "z2^d" || name == "Z2^d") return RootFamily::z2_product;
  if (name == "dihedral" || name == "I2") return RootFamily::dihedral;
  if (name == "direct_sum" || name == "direct-sum") return RootFamily::direct_sum;
  throw std::invalid_argument("unknown root-system family '" + name + "'");
}

Matrix Matrix::identity(int d) {
  Matrix m{d, std::vector<double>(static_cast<std::size_t>(d * d), 0.0)};
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Vec Matrix::apply(std::span<const double> x) const {
  Vec y(static_cast<std::size_t>(dim), 0.0);
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  Matrix out{dim, std::vector<double>(a.size(), 0.0)};
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      const double v = (*this)(i, k);
      for (int j = 0; j < dim; ++j) out(i, j) += v * rhs(k, j);
    }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out{dim, a};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out(i, j) = (*this)(j, i);
  return out;
}

namespace {

constexpr double kRootNorm = std::numbers::sqrt2;
constexpr double kRootNormTol = 1e-12;

bool same_vector(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

Vec negated(std::span<const double> a) {
  Vec v(a.begin(), a.end());
  for (auto& x : v) x = -x;
  return v;
}

using Key = std::vector<long long>;

Key canonical_key(const Matrix& m) {
  Key k(m.a.size());
  for (std::size_t i = 0; i < m.a.size(); ++i) k[i] = std::llround(m.a[i] * 1e12);
  return k;
}

std::string format_vec(std::span<const double> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

RootSystem::RootSystem(int dimension, std::vector<Vec> positive_roots,
                       std::vector<double> multiplicities, RootFamily family)
    : dim_(dimension), positive_(std::move(positive_roots)), mult_(std::move(multiplicities)),
      family_(family) {
  if (dim_ <= 0) throw std::invalid_argument("root system dimension must be positive");
  if (positive_.size() != mult_.size())
    throw std::invalid_argument("one multiplicity per positive root is required");
  for (const auto& a : positive_)
    if (static_cast<int>(a.size()) != dim_)
      throw std::invalid_argument("root dimension does not match system dimension");
}

std::vector<Vec> RootSystem::roots() const {
  std::vector<Vec> r(positive_.begin(), positive_.end());
  for (const auto& a : positive_) r.push_back(negated(a));
  return r;
}

int RootSystem::find_positive(std::span<const double> alpha, double tol) const {
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    if (same_vector(positive_[i], alpha, tol)) return static_cast<int>(i);
    const Vec neg = negated(positive_[i]);
    if (same_vector(neg, alpha, tol)) return static_cast<int>(i);
  }
  return -1;
}

double RootSystem::multiplicity_of(std::span<const double> alpha) const {
  const int i = find_positive(alpha);
  if (i < 0) throw std::invalid_argument("vector " + format_vec(alpha) + " is not a root");
  return mult_[static_cast<std::size_t>(i)];
}

double RootSystem::gamma() const {
  double g = 0.0;
  for (double k : mult_) g += k;
  return g;
}

bool RootSystem::is_z2_product() const {
  if (static_cast<int>(positive_.size()) != dim_) return false;
  std::vector<bool> seen(static_cast<std::size_t>(dim_), false);
  for (const auto& a : positive_) {
    int axis = -1;
    for (int j = 0; j < dim_; ++j) {
      const double v = a[static_cast<std::size_t>(j)];
      if (std::abs(v) > 1e-12) {
        if (axis >= 0) return false;
        axis = j;
      }
    }
    if (axis < 0 || seen[static_cast<std::size_t>(axis)]) return false;
    if (std::abs(std::abs(a[static_cast<std::size_t>(axis)]) - kRootNorm) > kRootNormTol) return false;
    seen[static_cast<std::size_t>(axis)] = true;
  }
  return true;
}

std::vector<double> RootSystem::axis_multiplicities() const {
  if (!is_z2_product()) throw std::invalid_argument("root system is not Z2^d");
  std::vector<double> k(static_cast<std::size_t>(dim_), 0.0);
  for (std::size_t i = 0; i < positive_.size(); ++i)
    for (int j = 0; j < dim_; ++j)
      if (std::abs(positive_[i][static_cast<std::size_t>(j)]) > 1e-12)
        k[static_cast<std::size_t>(j)] = mult_[i];
  return k;
}

void RootSystem::validate() const {
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    if (std::abs(norm(positive_[i]) - kRootNorm) > kRootNormTol)
      throw std::invalid_argument("root " + format_vec(positive_[i]) + " does not have norm sqrt(2)");
    if (!(mult_[i] >= 0.0) || !std::isfinite(mult_[i]))
      throw std::invalid_argument("multiplicities must be finite and nonnegative");
  }
  const auto all = roots();
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (j == i || j == i + positive_.size()) continue;
      // Parallel roots other than +-alpha are forbidden, which also makes
      // R+ and -R+ disjoint.
      const double c = dot(positive_[i], all[j]) / 2.0;
      if (std::abs(std::abs(c) - 1.0) < 1e-9)
        throw std::invalid_argument("roots " + format_vec(positive_[i]) + " and " +
                                    format_vec(all[j]) + " are parallel");
    }
    for (const auto& beta : all) {
      const Vec image = reflect(positive_[i], beta);
      if (find_positive(image) < 0)
        throw std::invalid_argument("root set is not closed under the reflection in " +
                                    format_vec(positive_[i]));
    }
  }
}

Vec reflect(std::span<const double> alpha, std::span<const double> x) {
  const double aa = dot(alpha, alpha);
  if (aa == 0.0) throw std::invalid_argument("reflect: alpha must be nonzero");
  const double c = 2.0 * dot(x, alpha) / aa;
  Vec y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * alpha[i];
  return y;
}

Matrix reflection_matrix(std::span<const double> alpha) {
  const int d = static_cast<int>(alpha.size());
  const double aa = dot(alpha, alpha);
  if (aa == 0.0) throw std::invalid_argument("reflection_matrix: alpha must be nonzero");
  Matrix m = Matrix::identity(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i, j) -= 2.0 * alpha[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(j)] / aa;
  return m;
}

WeylGroup generate_group(const RootSystem& R, std::size_t cap) {
  const int d = R.dimension();
  std::vector<Matrix> gens;
  for (const auto& a : R.positive_roots()) gens.push_back(reflection_matrix(a));

  std::map<Key, Matrix> found;
  std::vector<Matrix> frontier{Matrix::identity(d)};
  found.emplace(canonical_key(frontier.front()), frontier.front());
  while (!frontier.empty()) {
    std::vector<Matrix> next;
    for (const auto& g : frontier) {
      for (const auto& s : gens) {
        Matrix h = s * g;
        Key key = canonical_key(h);
        if (found.find(key) != found.end()) continue;
        if (found.size() >= cap)
          throw std::runtime_error("not a finite reflection group as given: closure exceeded " +
                                   std::to_string(cap) + " elements");
        found.emplace(std::move(key), h);
        next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
  WeylGroup G;
  G.dimension = d;
  G.elements.reserve(found.size());
  for (auto& [key, m] : found) G.elements.push_back(std::move(m));
  return G;
}

void check_multiplicity_invariance(const RootSystem& R, const WeylGroup& G) {
  const auto pos = R.positive_roots();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (const auto& g : G.elements) {
      const Vec image = g.apply(pos[i]);
      const int j = R.find_positive(image);
      if (j < 0)
        throw std::invalid_argument("group element maps root " + format_vec(pos[i]) +
                                    " outside the root system");
      const double ki = R.multiplicity(i);
      const double kj = R.multiplicity(static_cast<std::size_t>(j));
      if (std::abs(ki - kj) > 1e-12) {
        std::ostringstream os;
        os << "multiplicity is not G-invariant: root " << format_vec(pos[i]) << " (k=" << ki
           << ") and root " << format_vec(pos[static_cast<std::size_t>(j)]) << " (k=" << kj
           << ") lie in the same orbit";
        throw std::invalid_argument(os.str());
      }
    }
  }
}

namespace {

RootSystem build_z2(const RootSystemSpec& spec) {
  const int d = spec.dimension;
  if (d <= 0) throw std::invalid_argument("Z2^d requires dimension >= 1");
  std::vector<double> k = spec.multiplicities;
  if (k.empty()) k.assign(static_cast<std::size_t>(d), 0.0);
  if (k.size() == 1 && d > 1) k.assign(static_cast<std::size_t>(d), k.front());
  if (static_cast<int>(k.size()) != d)
    throw std::invalid_argument("Z2^d expects one multiplicity per axis");
  std::vector<Vec> pos;
  for (int j = 0; j < d; ++j) {
    Vec a(static_cast<std::size_t>(d), 0.0);
    a[static_cast<std::size_t>(j)] = kRootNorm;
    pos.push_back(std::move(a));
  }
  return RootSystem(d, std::move(pos), std::move(k), RootFamily::z2_product);
}

RootSystem build_dihedral(const RootSystemSpec& spec) {
  const int m = spec.dihedral_order;
  if (m < 2) throw std::invalid_argument("dihedral I2(m) requires m >= 2");
  std::vector<Vec> pos;
  for (int j = 0; j < m; ++j) {
    const double phi = std::numbers::pi * j / m;
    pos.push_back({kRootNorm * std::cos(phi), kRootNorm * std::sin(phi)});
  }
  // Snap tiny components so axis roots are exact.
  for (auto& a : pos)
    for (auto& c : a)
      if (std::abs(c) < 1e-15) c = 0.0;
  const auto& in = spec.multiplicities;
  std::vector<double> k(static_cast<std::size_t>(m), 0.0);
  if (in.empty()) {
  } else if (in.size() == 1) {
    std::fill(k.begin(), k.end(), in.front());
  } else if (in.size() == 2 && m % 2 == 0 && m != 2) {
    for (int j = 0; j < m; ++j) k[static_cast<std::size_t>(j)] = in[static_cast<std::size_t>(j % 2)];
  } else if (static_cast<int>(in.size()) == m) {
    k = in;
  } else {
    throw std::invalid_argument("dihedral multiplicities: give 1 value, 2 values (even m) or one per positive root");
  }
  return RootSystem(2, std::move(pos), std::move(k), RootFamily::dihedral);
}

RootSystem build_direct_sum(const RootSystemSpec& spec) {
  if (spec.components.empty()) throw std::invalid_argument("direct sum needs components");
  std::vector<RootSystem> parts;
  int d = 0;
  for (const auto& c : spec.components) {
    parts.push_back(build_root_system(c));
    d += parts.back().dimension();
  }
  std::vector<Vec> pos;
  std::vector<double> k;
  int offset = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.positive_roots().size(); ++i) {
      Vec a(static_cast<std::size_t>(d), 0.0);
      for (int j = 0; j < p.dimension(); ++j)
        a[static_cast<std::size_t>(offset + j)] = p.positive_roots()[i][static_cast<std::size_t>(j)];
      pos.push_back(std::move(a));
      k.push_back(p.multiplicity(i));
    }
    offset += p.dimension();
  }
  const bool all_z2 = std::all_of(parts.begin(), parts.end(),
                                  [](const RootSystem& p) { return p.family() == RootFamily::z2_product; });
  return RootSystem(d, std::move(pos), std::move(k),
                    all_z2 ? RootFamily::z2_product : RootFamily::direct_sum);
}

}  // namespace

RootSystem build_root_system(const RootSystemSpec& spec) {
  for (double k : spec.multiplicities)
    if (!(k >= 0.0) || !std::isfinite(k))
      throw std::invalid_argument("multiplicities must be finite and nonnegative");
  RootSystem R = [&] {
    switch (spec.family) {
      case RootFamily::z2_product: return build_z2(spec);
      case RootFamily::dihedral: return build_dihedral(spec);
      case RootFamily::direct_sum: return build_direct_sum(spec);
    }
    throw std::invalid_argument("unknown root family");
  }();
  R.validate();
  check_multiplicity_invariance(R, generate_group(R));
  return R;
}

ScalarInvariants scalar_invariants(const RootSystem& R, const WeylGroup& G) {
  return {R.gamma(), R.homogeneous_dimension(), G.order()};
}

double weight(const RootSystem& R, std::span<const double> x) {
  double w = 1.0;
  const auto pos = R.positive_roots();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double k = R.multiplicity(i);
    if (k == 0.0) continue;  // 0^0 := 1
    w *= std::pow(std::abs(dot(pos[i], x)), 2.0 * k);
  }
  return w;
}

double orbit_distance(const WeylGroup& G, std::span<const double> x, std::span<const double> y) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : G.elements) {
    const Vec gy = g.apply(y);
    best = std::min(best, distance(x, gy));
  }
  return best;
}

bool orbit_ball_membership(const WeylGroup& G, std::span<const double> center, double r,
                           std::span<const double> x) {
  return orbit_distance(G, center, x) < r;
}

Vec chamber_representative(const RootSystem& R, std::span<const double> x) {
  Vec y(x.begin(), x.end());
  const auto pos = R.positive_roots();
  // Each reflection strictly increases <y, v> for a regular v in the chamber,
  // so this terminates after at most |R+| productive steps per orbit point.
  for (std::size_t iter = 0; iter < 64 * pos.size() + 8; ++iter) {
    bool changed = false;
    for (const auto& a : pos) {
      if (dot(a, y) < -1e-15) {
        y = reflect(a, y);
        changed = true;
      }
    }
    if (!changed) return y;
  }
  throw std::runtime_error("chamber_representative did not converge");
}

}  // namespace dunkl
