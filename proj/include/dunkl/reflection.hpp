#pragma once

// Root systems, finite reflection groups, the weight omega_k and the
// orbit metric rho.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dunkl/numeric.hpp"

namespace dunkl {

enum class RootFamily { z2_product, dihedral, direct_sum };

std::string to_string(RootFamily f);
RootFamily parse_root_family(const std::string& name);

/// Input description for build_root_system.
///
/// z2_product: `dimension` axes, `multiplicities` has one entry per axis (or a
/// single entry broadcast to all axes).
/// dihedral: rank two system I_2(m) with m = `dihedral_order`. Multiplicities
/// are one value, two values (one per reflection class, m even only) or one
/// value per positive root.
/// direct_sum: orthogonal sum of `components` in block order.
struct RootSystemSpec {
  RootFamily family = RootFamily::z2_product;
  int dimension = 1;
  int dihedral_order = 0;
  std::vector<double> multiplicities;
  std::vector<RootSystemSpec> components;
};

/// Dense d x d matrix, row-major.
struct Matrix {
  int dim = 0;
  std::vector<double> a;

  static Matrix identity(int d);
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * dim + j)]; }
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * dim + j)]; }
  Vec apply(std::span<const double> x) const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix transpose() const;
};

/// Reduced root system with a positive subsystem and a nonnegative
/// multiplicity per positive root (negative roots share the value).
class RootSystem {
 public:
  RootSystem(int dimension, std::vector<Vec> positive_roots, std::vector<double> multiplicities,
             RootFamily family = RootFamily::direct_sum);

  int dimension() const noexcept { return dim_; }
  RootFamily family() const noexcept { return family_; }

  std::span<const Vec> positive_roots() const noexcept { return positive_; }
  /// Multiplicity of positive root i.
  double multiplicity(std::size_t i) const { return mult_.at(i); }
  std::span<const double> multiplicities() const noexcept { return mult_; }

  /// Full root set R = R+ followed by -R+.
  std::vector<Vec> roots() const;
  /// Multiplicity of an arbitrary root vector (matched up to sign), throws if
  /// the vector is not a root.
  double multiplicity_of(std::span<const double> alpha) const;
  /// Index into positive_roots() of +-alpha, or -1.
  int find_positive(std::span<const double> alpha, double tol = 1e-9) const;

  double gamma() const;
  double homogeneous_dimension() const { return dim_ + 2.0 * gamma(); }

  /// True when every positive root is sqrt(2) e_j for distinct axes j and
  /// every axis carries one root, i.e. the system is Z_2^d.
  bool is_z2_product() const;
  /// Per-axis multiplicities of a Z_2^d system.
  std::vector<double> axis_multiplicities() const;

  /// Checks the structural invariants (norm sqrt(2), closure under own
  /// reflections, R cap R alpha = {+-alpha}, k >= 0). Throws on violation.
  void validate() const;

 private:
  int dim_;
  std::vector<Vec> positive_;
  std::vector<double> mult_;
  RootFamily family_;
};

struct WeylGroup {
  int dimension = 0;
  std::vector<Matrix> elements;  // canonical order, identity included
  std::size_t order() const noexcept { return elements.size(); }
};

struct ScalarInvariants {
  double gamma = 0.0;
  double homogeneous_dimension = 0.0;
  std::size_t group_order = 0;
};

inline constexpr std::size_t kDefaultGroupCap = 10000;

RootSystem build_root_system(const RootSystemSpec& spec);

/// sigma_alpha(x) = x - 2 <x,alpha>/|alpha|^2 alpha.
Vec reflect(std::span<const double> alpha, std::span<const double> x);
Matrix reflection_matrix(std::span<const double> alpha);

/// Closure of the reflections in R+ under composition. Elements are rounded
/// to 12 decimals for membership tests and returned sorted by that key.
WeylGroup generate_group(const RootSystem& R, std::size_t cap = kDefaultGroupCap);

/// Checks that the multiplicity is constant on G-orbits of roots. Throws
/// std::invalid_argument naming an offending pair.
void check_multiplicity_invariance(const RootSystem& R, const WeylGroup& G);

ScalarInvariants scalar_invariants(const RootSystem& R, const WeylGroup& G);

/// omega_k(x) = prod_{alpha in R+} |<alpha,x>|^{2k(alpha)} with 0^0 = 1.
double weight(const RootSystem& R, std::span<const double> x);

/// rho(x,y) = min_g |x - g y|.
double orbit_distance(const WeylGroup& G, std::span<const double> x, std::span<const double> y);

/// True iff rho(center, x) < r.
bool orbit_ball_membership(const WeylGroup& G, std::span<const double> center, double r,
                           std::span<const double> x);

/// Representative of the orbit of x in the closed chamber
/// {y : <alpha,y> >= 0 for all alpha in R+}.
Vec chamber_representative(const RootSystem& R, std::span<const double> x);

}  // namespace dunkl
