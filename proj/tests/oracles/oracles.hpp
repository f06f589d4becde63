#pragma once

// Reference computations used by the tests. None of them calls into the
// library under test.

#include <cstddef>
#include <vector>

namespace oracle {

/// Explicit Euler for u_t = u'' + (2k/x) u' - (k/x^2)(u(x) - u(-x)) on the
/// half-shifted uniform grid x_i = (i + 1/2 - N/2) h of [-L, L], zero
/// outside. The reflected value comes from the mirrored index. The step is
/// 0.25 h^2 / (1 + 2k), shortened so the snapshot times are hit exactly.
struct PdeSolution {
  double h = 0.0;
  std::vector<double> x;
  std::vector<std::vector<double>> u;  // one row per snapshot time
};

/// Initial datum exp(-(x - y)^2 / (4 s)) normalized to unit mass in
/// 2^k |x|^{2k} dx.
PdeSolution evolve_rank1(double k, double y, double s, const std::vector<double>& snapshots, double L, double h);

/// Linear interpolation of a snapshot.
double sample(const PdeSolution& sol, std::size_t snapshot, double x);

/// Same initial datum pushed forward by a kernel K(t, x, z) through
/// adaptive quadrature against 2^k |z|^{2k} dz.
template <class K>
double kernel_applied_to_datum(K&& kernel, double k, double y, double s, double t, double x);

/// Classical heat kernel on R and t d/dt of it.
double gaussian(double t, double x, double y);
double gaussian_t_dt(double t, double x, double y);

/// For f(x) = exp(-x^2 / (4a)) on R: T_t f(x) and t d/dt T_t f(x).
double gaussian_flow(double a, double t, double x);
double gaussian_flow_t_dt(double a, double t, double x);

/// sup over all subsequences (length >= 2) of (sum |a_{i+1} - a_i|^sigma)^{1/sigma},
/// by enumerating all 2^n subsets.
double brute_variation(const std::vector<double>& a, double sigma);

/// (sum over brackets of (max over pairs |a_i - a_j|)^2)^{1/2} by pair
/// enumeration; brackets are inclusive index ranges.
double brute_oscillation(const std::vector<double>& a,
                         const std::vector<std::pair<std::size_t, std::size_t>>& brackets);

}  // namespace oracle

#include "oracles_impl.hpp"
