#pragma once

// Experiment configuration: flat key-value text with [section] headers.
// Every experiment has a reference configuration; a file overrides keys of
// the reference configuration named by experiment.name.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dunkl/heat_kernel.hpp"
#include "dunkl/reflection.hpp"

namespace dunkl {

struct GridConfig {
  double half_width = 8.0;
  int resolution = 256;
  double grading = kDefaultGrading;
};

struct OperatorConfig {
  std::vector<std::string> names{"maximal", "gfunc", "variation", "oscillation"};
  std::vector<int> orders{0, 1};
  double sigma = 3.0;
  double t_min = 2e-3;
  double t_max = 1e2;
  std::size_t t_count = 64;
  std::size_t bracket_stride = 4;
};

struct WeakConfig {
  std::vector<double> scales{0.1, 0.2, 0.4};
  std::vector<double> positions{0.5, 1.5};
  double position_scale = 0.2;
  double lambda_decades = 3.0;
  std::size_t lambda_count = 13;
  double slope_limit = 0.05;
  double spread_limit = 2.0;
};

struct AtomsConfig {
  double r_min = 0.6;
  double r_max = 2.4;
  std::size_t radii = 5;
  std::vector<double> offsets{0.0, 0.5, 1.0, 1.5, 2.25};  // center = offset * radius
  std::size_t min_success = 20;
  double slope_limit = 0.1;
};

struct BmoConfig {
  std::vector<std::string> battery{"log", "log1p", "cos", "martingale", "indicator", "log2"};
  std::size_t centers_per_axis = 33;
  double extent = 2.0;
  double r_min = 0.125;
  std::size_t scales = 4;
  double spread_limit = 3.0;
  double doubling_tolerance = 0.25;
  std::vector<int> info_orders;  // reported, not asserted
};

struct BoundsConfig {
  std::vector<int> orders{0, 1, 2};
  std::vector<double> times{0.1, 1.0, 10.0};
  double span = 4.0;
  int points_per_axis = 9;
  double c = kDefaultGaussianC;
};

struct ExperimentConfig {
  std::string experiment = "exp_weak_11";
  std::optional<std::uint64_t> seed;
  RootSystemSpec root;
  GridConfig grid;
  DerivativeConfig derivative;
  OperatorConfig ops;
  WeakConfig weak;
  AtomsConfig atoms;
  BmoConfig bmo;
  BoundsConfig bounds;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"exp_weak_11", "exp_h1_atoms", "exp_bmo_blo",
                                              "exp_kernel_bounds"};
  return names;
}

/// Reference configuration of an experiment (d = 1, k = 1). Throws on an
/// unknown name.
ExperimentConfig default_config(const std::string& experiment);

/// Parses a config file. Unknown sections or keys, unparsable values and
/// out-of-range parameters throw std::invalid_argument naming the key.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

/// Range checks shared by parse_config and the CLI overrides.
void validate_config(const ExperimentConfig& cfg);

/// Writes every key; parse_config(write_config(c)) reproduces c.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace dunkl
