#pragma once

#include <random>
#include <vector>

#include "dunkl/discretization.hpp"
#include "dunkl/reflection.hpp"

namespace testing {

inline dunkl::RootSystem z2(std::vector<double> k) {
  dunkl::RootSystemSpec s;
  s.dimension = static_cast<int>(k.size());
  s.multiplicities = std::move(k);
  return dunkl::build_root_system(s);
}

inline dunkl::RootSystem dihedral(int m, std::vector<double> k) {
  dunkl::RootSystemSpec s;
  s.family = dunkl::RootFamily::dihedral;
  s.dimension = 2;
  s.dihedral_order = m;
  s.multiplicities = std::move(k);
  return dunkl::build_root_system(s);
}

inline dunkl::Vec random_point(std::mt19937_64& rng, int d, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  dunkl::Vec x(static_cast<std::size_t>(d));
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace testing
