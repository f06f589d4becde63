#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "dunkl/reflection.hpp"
#include "support.hpp"

using namespace dunkl;
using testing::z2;

TEST_CASE("Z2^1 root system") {
  const RootSystem R = z2({1.0});
  const auto roots = R.roots();
  REQUIRE(roots.size() == 2);
  REQUIRE(R.positive_roots().size() == 1);
  CHECK(R.positive_roots()[0][0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(roots[0][0]) == doctest::Approx(std::sqrt(2.0)));
  CHECK(roots[0][0] == doctest::Approx(-roots[1][0]));
}

TEST_CASE("Z2^2 with k = (0.5, 1.5): gamma and homogeneous dimension") {
  const RootSystem R = z2({0.5, 1.5});
  CHECK(R.roots().size() == 4);
  // gamma = sum over R+ of k(alpha)
  CHECK(R.gamma() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(R.homogeneous_dimension() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("dihedral I2(4): 8 roots of norm sqrt 2, group of order 8") {
  const RootSystem R = testing::dihedral(4, {1.0, 0.5});
  const auto roots = R.roots();
  CHECK(roots.size() == 8);
  for (const auto& a : roots) CHECK(norm(a) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // Independent closure of the root set under its own reflections.
  std::set<std::pair<long, long>> keys;
  for (const auto& a : roots) keys.insert({std::lround(a[0] * 1e9), std::lround(a[1] * 1e9)});
  for (const auto& a : roots)
    for (const auto& b : roots) {
      const Vec c = reflect(a, b);
      CHECK(keys.count({std::lround(c[0] * 1e9), std::lround(c[1] * 1e9)}) == 1);
    }
  CHECK(generate_group(R).order() == 8);
}

TEST_CASE("reflect") {
  const Vec a{std::sqrt(2.0)};
  CHECK(reflect(a, Vec{3.0})[0] == doctest::Approx(-3.0));
  const Vec b{1.0, 1.0};
  const Vec perp{2.0, -2.0};
  const Vec r = reflect(b, perp);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(-2.0));
  const Vec mb = reflect(b, b);
  CHECK(mb[0] == doctest::Approx(-1.0));
  CHECK(mb[1] == doctest::Approx(-1.0));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Vec al = testing::random_point(rng, 3);
    const Vec x = testing::random_point(rng, 3);
    const Vec back = reflect(al, reflect(al, x));
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(back[j] - x[j]) <= 1e-12);
  }
}

TEST_CASE("group orders") {
  CHECK(generate_group(z2({1.0})).order() == 2);
  CHECK(generate_group(z2({1.0, 0.0})).order() == 4);
  CHECK(generate_group(z2({1.0, 2.0, 0.5})).order() == 8);
  CHECK(generate_group(testing::dihedral(3, {1.0})).order() == 6);
  const auto G1 = generate_group(z2({1.0}));
  CHECK(G1.elements[0].a[0] * G1.elements[1].a[0] == doctest::Approx(-1.0));
}

TEST_CASE("group closure: involutive generators, idempotent closure") {
  const RootSystem R = testing::dihedral(6, {1.0, 0.25});
  const WeylGroup G = generate_group(R);
  CHECK(G.order() == 12);
  for (const auto& a : R.positive_roots()) {
    const Matrix s = reflection_matrix(a);
    const Matrix s2 = s * s;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(s2(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
  }
  // Closing the element set again adds nothing.
  for (const auto& g : G.elements)
    for (const auto& h : G.elements) {
      const Matrix p = g * h;
      bool found = false;
      for (const auto& e : G.elements) {
        double diff = 0.0;
        for (std::size_t i = 0; i < e.a.size(); ++i) diff = std::max(diff, std::abs(e.a[i] - p.a[i]));
        found = found || diff < 1e-10;
      }
      CHECK(found);
    }
  check_multiplicity_invariance(R, G);
}

TEST_CASE("weight") {
  CHECK(weight(z2({0.0, 0.0}), Vec{0.0, 3.0}) == 1.0);
  CHECK(weight(z2({1.0}), Vec{2.0}) == doctest::Approx(8.0).epsilon(1e-14));
  std::mt19937_64 rng(3);
  for (const RootSystem& R : {z2({0.5, 1.5}), testing::dihedral(4, {1.0, 0.5})}) {
    const WeylGroup G = generate_group(R);
    for (int i = 0; i < 100; ++i) {
      const Vec x = testing::random_point(rng, 2);
      const auto& g = G.elements[rng() % G.order()];
      CHECK(weight(R, g.apply(x)) == doctest::Approx(weight(R, x)).epsilon(1e-12));
      const double t = 0.3 + 2.0 * std::uniform_real_distribution<double>()(rng);
      const Vec tx{t * x[0], t * x[1]};
      CHECK(weight(R, tx) == doctest::Approx(std::pow(t, 2.0 * R.gamma()) * weight(R, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("orbit distance and orbit balls") {
  const auto G1 = generate_group(z2({1.0}));
  CHECK(orbit_distance(G1, Vec{0.7}, Vec{0.7}) == 0.0);
  CHECK(orbit_distance(G1, Vec{1.0}, Vec{-1.0}) == 0.0);
  const auto G2 = generate_group(z2({1.0, 1.0}));
  CHECK(orbit_distance(G2, Vec{1.0, 2.0}, Vec{-1.0, -2.0}) == doctest::Approx(0.0));
  CHECK(orbit_distance(G2, Vec{1.0, 2.0}, Vec{2.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(orbit_ball_membership(G1, Vec{1.0}, 1e-6, Vec{1.0}));
  CHECK(orbit_ball_membership(G1, Vec{1.0}, 0.5, Vec{-1.0}));
  CHECK_FALSE(orbit_ball_membership(G1, Vec{1.0}, 0.5, Vec{0.4}));
  CHECK(orbit_distance(G1, Vec{1.0}, Vec{0.4}) == doctest::Approx(0.6));

  std::mt19937_64 rng(5);
  const auto G = generate_group(testing::dihedral(5, {1.0}));
  for (int i = 0; i < 200; ++i) {
    const Vec x = testing::random_point(rng, 2), y = testing::random_point(rng, 2),
              z = testing::random_point(rng, 2);
    CHECK(orbit_distance(G, x, z) <= orbit_distance(G, x, y) + orbit_distance(G, y, z) + 1e-12);
    CHECK(orbit_distance(G, x, y) <= distance(x, y) + 1e-15);
  }
}

TEST_CASE("malformed root systems are rejected") {
  RootSystemSpec s;
  s.dimension = 2;
  s.multiplicities = {1.0, -1.0};
  CHECK_THROWS(build_root_system(s));
  s.multiplicities = {1.0, 2.0, 3.0};
  CHECK_THROWS(build_root_system(s));
  RootSystemSpec d;
  d.family = RootFamily::dihedral;
  d.dimension = 2;
  d.dihedral_order = 3;
  d.multiplicities = {1.0, 2.0};  // odd m has one reflection class
  CHECK_THROWS(build_root_system(d));
}
