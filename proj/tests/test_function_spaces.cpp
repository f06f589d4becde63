#include <doctest.h>

#include <cmath>
#include <random>

#include "dunkl/function_spaces.hpp"
#include "support.hpp"

using namespace dunkl;
using testing::z2;

namespace {

SampledFunction shifted(const SampledFunction& f, double c) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x += c;
  return SampledFunction(f.grid(), std::move(v));
}

SampledFunction log_inverse(const GridPtr& g) {
  return SampledFunction::from(g, [](std::span<const double> x) { return std::log(1.0 / norm(x)); });
}

}  // namespace

TEST_CASE("norms of constants and invariance under adding constants") {
  const RootSystem R = z2({1.0});
  const auto G = generate_group(R);
  const auto g = build_grid(R, 4.0, 256);
  const auto fam = lattice_ball_family(1, 2.0, 17, 0.125, 4);
  const auto c = SampledFunction::constant(g, 3.5);
  CHECK(bmo_norm(c, fam).value <= 1e-14);
  CHECK(bmo_rho_norm(c, fam, G).value <= 1e-14);
  CHECK(blo_norm(c, fam).value <= 1e-14);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto f = SampledFunction::from(g, [&](std::span<const double>) { return u(rng); });
  const auto f2 = shifted(f, 7.0);
  CHECK(std::abs(bmo_norm(f, fam).value - bmo_norm(f2, fam).value) <= 1e-12);
  CHECK(std::abs(bmo_rho_norm(f, fam, G).value - bmo_rho_norm(f2, fam, G).value) <= 1e-12);
  CHECK(std::abs(blo_norm(f, fam).value - blo_norm(f2, fam).value) <= 1e-12);
}

TEST_CASE("BMO <= 2 BLO on random functions") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const RootSystem& R : {z2({1.0}), z2({0.5, 0.0})}) {
    const auto g = build_grid(R, 3.0, R.dimension() == 1 ? 256 : 48);
    const auto fam = lattice_ball_family(R.dimension(), 2.0, R.dimension() == 1 ? 17 : 9, 0.25, 3);
    for (int i = 0; i < 5; ++i) {
      const auto f = SampledFunction::from(g, [&](std::span<const double>) { return u(rng); });
      CHECK(bmo_norm(f, fam).value <= 2.0 * blo_norm(f, fam).value * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("log(1/|x|): finite BMO, stable under a denser family, finite BLO") {
  const RootSystem R = z2({0.0});
  const auto g = build_grid(R, 1.0, 2048);
  const auto f = log_inverse(g);
  const double a = bmo_norm(f, lattice_ball_family(1, 0.75, 17, 1.0 / 32, 4)).value;
  const double b = bmo_norm(f, lattice_ball_family(1, 0.75, 33, 1.0 / 32, 4)).value;
  CHECK(std::isfinite(a));
  CHECK(std::abs(b / a - 1.0) <= 0.1);
  CHECK(std::isfinite(blo_norm(f, lattice_ball_family(1, 0.75, 17, 1.0 / 32, 4)).value));
}

TEST_CASE("BMO versus BMO^rho") {
  const RootSystem R = z2({1.0});
  const auto G = generate_group(R);
  const auto g = build_grid(R, 4.0, 512);
  const auto fam = lattice_ball_family(1, 2.0, 33, 0.125, 4);
  // G-invariant: BMO <= C BMO^rho with C reported.
  const auto f = log_inverse(g);
  const double C = bmo_norm(f, fam).value / bmo_rho_norm(f, fam, G).value;
  MESSAGE("BMO / BMO^rho for log(1/|x|): " << C);
  CHECK(std::isfinite(C));
  CHECK(C <= 2.0);
  // Odd, on balls away from 0: each orbit ball holds B and -B, where the
  // function takes both signs.
  BallFamily away;
  for (double c : {0.5, 0.75, 1.0, 1.5, 2.0})
    for (double r : {0.125, 0.25, 0.4}) away.balls.push_back({Vec{c}, r});
  const auto odd = SampledFunction::from(g, [](std::span<const double> x) {
    return (x[0] > 0 ? 1.0 : -1.0) * std::log(1.0 / std::abs(x[0]));
  });
  CHECK(bmo_rho_norm(odd, away, G).value > bmo_norm(odd, away).value);
}

TEST_CASE("(1,q)-atoms") {
  const RootSystem R = z2({1.0});
  const auto G = generate_group(R);
  const auto g = build_grid(R, 8.0, 512);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uc(-3.0, 3.0), ur(0.6, 2.0);
  for (int b = 0; b < 50; ++b) {
    const Ball B{Vec{uc(rng)}, ur(rng)};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const double q = seed == 4 ? INFINITY : 1.5 + 0.5 * static_cast<double>(seed);
      const Atom a = make_atom_1q(g, B, q, seed);
      const auto c = check_atom(a, G);
      CHECK(c.ok);
      CHECK(std::abs(c.mean) <= 1e-10);
    }
  }
  // The bound for 2B is omega(2B)^{1/q - 1}, recomputed by quadrature.
  const Ball B{Vec{1.0}, 0.5}, B2{Vec{1.0}, 1.0};
  const auto c1 = check_atom(make_atom_1q(g, B, 2.0, 1), G);
  const auto c2 = check_atom(make_atom_1q(g, B2, 2.0, 1), G);
  CHECK(c2.bound == doctest::Approx(std::pow(ball_volume(R, B2.center, 1.0), -0.5)).epsilon(1e-6));
  CHECK(c1.bound / c2.bound ==
        doctest::Approx(std::sqrt(ball_volume(R, B2.center, 1.0) / ball_volume(R, B.center, 0.5))).epsilon(1e-6));
}

TEST_CASE("Laplacian atoms") {
  for (double k : {0.0, 1.0}) {
    const RootSystem R = z2({k});
    const auto G = generate_group(R);
    const HeatKernelModel model(R);
    const auto g = build_grid(R, 8.0, 512);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uc(-3.0, 3.0), ur(0.5, 2.0);
    for (int b = 0; b < 10; ++b) {
      const Ball B{Vec{uc(rng)}, ur(rng)};
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Atom a = make_atom_laplacian(model, g, B, seed);
        const auto c = check_atom(a, G);
        CHECK(c.ok);
        CHECK(c.support_ok);
        CHECK(c.witness_norm <= c.witness_bound * (1.0 + 1e-3));
        CHECK(c.norm <= c.bound * (1.0 + 1e-3));
        // Both b and a vanish off the orbit ball.
        for (std::size_t i = 0; i < g->size(); ++i)
          if (!orbit_ball_membership(G, B.center, B.radius, g->node(i))) {
            CHECK(a.values[i] == 0.0);
            CHECK((*a.witness)[i] == 0.0);
          }
      }
    }
  }
  // k = 0: integration by parts gives mean zero.
  const RootSystem R0 = z2({0.0});
  const auto g0 = build_grid(R0, 8.0, 2048);
  const Atom a = make_atom_laplacian(HeatKernelModel(R0), g0, Ball{Vec{0.5}, 2.0}, 3);
  CHECK(std::abs(integrate(a.values)) <= 1e-6);
}

TEST_CASE("Calderon-Zygmund decomposition") {
  const RootSystem R = z2({1.0});
  const auto g = build_grid(R, 4.0, 256);
  const auto f = SampledFunction::from(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
  const auto none = cz_decompose(f, 1.5);
  CHECK(none.cubes.empty());
  CHECK(none.bad.empty());
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(none.good[i] == f[i]);

  const auto ind = SampledFunction::from(g, [](std::span<const double> x) { return std::abs(x[0] - 1.0) < 0.2 ? 1.0 : 0.0; });
  const double lambda = 0.5;
  const auto cz = cz_decompose(ind, lambda);
  const auto chk = check_cz(cz);
  CHECK(chk.all());
  CHECK(cz.max_overlap <= kOverlapLimit);
  CHECK(cz.max_bad_mean <= 1e-10);
  CHECK_FALSE(cz.cubes.empty());
  // Direct summation of the ball volumes.
  double sum = 0.0;
  for (double v : cz.ball_volumes) sum += v;
  const double l1 = integrate(ind);
  CHECK(lambda * sum / l1 == doctest::Approx(cz.ball_constant).epsilon(1e-12));
  MESSAGE("sum omega(B_i) <= (C / lambda) ||f||_1 with C = " << cz.ball_constant);
  CHECK(cz.ball_constant <= cz.ball_cube_ratio * (1.0 + 1e-12));
  CHECK_THROWS(cz_decompose(ind, 1e-6));
}
