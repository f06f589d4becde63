#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dunkl {

/// Point or vector in R^d. Dimensions are small (d <= 3).
using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);

/// Hierarchical pairwise summation in a fixed order, so results do not
/// depend on how the terms were produced.
double pairwise_sum(std::span<const double> terms);

/// Sum of a[i] * b[i] with pairwise reduction.
double pairwise_dot(std::span<const double> a, std::span<const double> b);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// Ordinary least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

/// Number of workers for node-parallel loops. Read from DUNKL_LAB_WORKERS,
/// defaulting to the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on worker_count() threads. Each index is
/// written by exactly one invocation, so the output is independent of the
/// worker count as long as body only writes slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

/// Raised when an adaptive quadrature cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double achieved_tolerance)
      : std::runtime_error(what), best_(best_estimate), achieved_(achieved_tolerance) {}
  double best_estimate() const noexcept { return best_; }
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double best_;
  double achieved_;
};

}  // namespace dunkl
