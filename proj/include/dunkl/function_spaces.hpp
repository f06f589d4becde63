#pragma once

// BMO, BMO^rho and BLO norms on sampled functions, (1,q)- and Laplacian
// atoms, and a dyadic Calderon-Zygmund decomposition with checkable
// properties.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dunkl/discretization.hpp"
#include "dunkl/heat_kernel.hpp"
#include "dunkl/reflection.hpp"

namespace dunkl {

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct BallFamily {
  std::vector<Ball> balls;
  std::string policy;
};

/// Centers on a lattice with `centers_per_axis` points in [-extent, extent]^d
/// times radii r_min * 2^j, j < scales.
BallFamily lattice_ball_family(int dimension, double extent, std::size_t centers_per_axis,
                               double r_min, std::size_t scales);

inline constexpr std::size_t kMinBallNodes = 16;

struct NormValue {
  double value = 0.0;
  std::size_t argmax = 0;      // index into the family
  std::size_t admissible = 0;  // balls holding at least kMinBallNodes nodes
};

/// sup over the family of (1/omega(B)) int_B |f - f_B| d(omega), with B
/// restricted to balls holding at least 16 nodes. Throws if none qualifies.
NormValue bmo_norm(const SampledFunction& f, const BallFamily& family);
/// Same with the orbit balls theta(B).
NormValue bmo_rho_norm(const SampledFunction& f, const BallFamily& family, const WeylGroup& G);
/// sup of (1/omega(B)) int_B (f - min_B f) d(omega).
NormValue blo_norm(const SampledFunction& f, const BallFamily& family);

enum class AtomKind { one_q, laplacian };

struct Atom {
  AtomKind kind = AtomKind::one_q;
  Ball ball;
  double q = 2.0;
  int M = 0;
  double ball_volume = 0.0;                 // omega(B), adaptive quadrature
  SampledFunction values;                   // a
  std::optional<SampledFunction> witness;  // b with a = Delta_k b
  /// max |a - Delta_k b| / max |a| with Delta_k b by fine central differences
  /// on the closed form of b (Laplacian atoms only).
  double residual = 0.0;
};

inline constexpr std::size_t kMinAtomNodes = 32;

/// Random values on the nodes of B, omega-mean removed, scaled to
/// 0.99 omega(B)^{1/q - 1} in L^q(omega). q in (1, inf]; deterministic in seed.
Atom make_atom_1q(const GridPtr& grid, const Ball& B, double q, std::uint64_t seed);

/// a = Delta_k b with b a G-invariant product bump supported in theta(B),
/// scaled so that ||b||_2 <= r^2 omega(B)^{-1/2} and ||a||_2 <= omega(B)^{-1/2}.
/// The bump shape depends on the seed. Z2^d only.
Atom make_atom_laplacian(const HeatKernelModel& model, const GridPtr& grid, const Ball& B,
                         std::uint64_t seed);

struct AtomCheck {
  bool support_ok = true;
  double mean = 0.0;        // int a d(omega)
  double norm = 0.0;        // ||a||_q
  double bound = 0.0;       // omega(B)^{1/q-1}
  double witness_norm = 0.0;
  double witness_bound = 0.0;
  double residual = 0.0;
  bool ok = false;
};

AtomCheck check_atom(const Atom& a, const WeylGroup& G);

struct Cube {
  Vec lo;
  Vec hi;
  int level = 0;
  std::vector<std::size_t> nodes;
  double mass = 0.0;  // sum of quad weights
};

struct BadPart {
  std::vector<std::size_t> nodes;
  std::vector<double> values;
};

struct CZDecomposition {
  double lambda = 0.0;
  double alpha_star = 0.0;
  SampledFunction good;
  std::vector<BadPart> bad;
  std::vector<Cube> cubes;
  std::vector<Ball> balls;    // circumscribed
  std::vector<Ball> dilated;  // alpha_star times the radius
  std::vector<double> ball_volumes;

  // Measured constants.
  double identity_error = 0.0;  // max |f - g - sum b_i|
  double good_constant = 0.0;   // ||g||_inf / lambda
  double bad_constant = 0.0;    // max ||b_i||_1 / (lambda omega(B_i))
  double ball_constant = 0.0;   // lambda sum omega(B_i) / ||f||_1
  std::size_t max_overlap = 0;  // of the dilated balls, counted at nodes
  double max_bad_mean = 0.0;    // max |int b_i d(omega)| / (lambda omega(Q_i))
  bool support_ok = true;       // supp b_i inside the dilated ball

  // Structural constants of the dyadic tree (independent of f and lambda).
  double doubling_constant = 0.0;  // max omega(parent) / omega(child)
  double ball_cube_ratio = 0.0;    // max omega(B_Q) / omega(Q)
  double cube_ball_ratio = 0.0;    // max omega(Q) / omega(B_Q)
};

inline constexpr std::size_t kOverlapLimit = 12;

/// Dyadic stopping time on [-L, L]^d. Rejects lambda at or below the
/// average of |f| over the box.
CZDecomposition cz_decompose(const SampledFunction& f, double lambda);

struct CZCheck {
  bool identity = false;
  bool good_bounded = false;
  bool supports = false;
  bool bad_bounded = false;
  bool balls_bounded = false;
  bool all() const { return identity && good_bounded && supports && bad_bounded && balls_bounded; }
};

CZCheck check_cz(const CZDecomposition& cz);

}  // namespace dunkl
