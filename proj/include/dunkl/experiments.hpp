#pragma once

// Experiment drivers. Each is a pure function of the configuration and the
// seed; rows come out ordered by case.

#include <string>
#include <utility>
#include <vector>

#include "dunkl/config.hpp"
#include "dunkl/discretization.hpp"
#include "dunkl/operators.hpp"
#include "dunkl/report.hpp"

namespace dunkl {

/// G-invariant (radial) BMO test functions:
///   log        log(1/|x|)
///   log1p      log(1 + 1/|x|)
///   cos        cos(2 pi |x|) on |x| < 3, else 0
///   martingale sum over dyadic levels l < 8 of +-1/2 on the dyadic
///              intervals of [0, 4) in |x| (signs from a fixed generator)
///   indicator  1 on |x| < 1
///   log2       max(0, log(1/|x|)) + max(0, log(2/||x| - 1.5|))
///   constant   1 (zero norm; exercises the exclusion guard)
SampledFunction battery_function(const std::string& name, const GridPtr& grid);

/// One operator at one derivative order.
struct OperatorCase {
  std::string name;  // maximal, gfunc, variation, oscillation
  int m = 0;
};

/// (operator, m) pairs of a config. The g-function skips m = 0; when no
/// order >= 1 is configured it runs at m = 1.
std::vector<OperatorCase> operator_cases(const OperatorConfig& ops);

/// Operator values at every node from one trajectory.
std::vector<double> operator_values(const OperatorCase& op, const Trajectory& traj, const TimeGrid& times,
                                    double sigma, const OscillationBrackets& brackets);

ExperimentReport exp_weak_11(const ExperimentConfig& cfg);
ExperimentReport exp_h1_atoms(const ExperimentConfig& cfg);
ExperimentReport exp_bmo_blo(const ExperimentConfig& cfg);
ExperimentReport exp_kernel_bounds(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment and fills in the timing and config echo.
/// Throws if the seed is missing.
ExperimentReport run(const ExperimentConfig& cfg);

}  // namespace dunkl
