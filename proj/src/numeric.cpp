#include "dunkl/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace dunkl {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

constexpr std::size_t kPairwiseBlock = 32;

double pairwise_impl(const double* p, std::size_t n) {
  if (n <= kPairwiseBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_impl(p, half) + pairwise_impl(p + half, n - half);
}

double pairwise_dot_impl(const double* a, const double* b, std::size_t n) {
  if (n <= kPairwiseBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_dot_impl(a, b, half) + pairwise_dot_impl(a + half, b + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> terms) {
  return pairwise_impl(terms.data(), terms.size());
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pairwise_dot: length mismatch");
  return pairwise_dot_impl(a.data(), b.data(), a.size());
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : v) x = std::exp(x);
  if (n > 1) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("ls_slope: need >= 2 paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
  return sxy / sxx;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("DUNKL_LAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_for(n, worker_count(), body);
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Static contiguous chunks; each index belongs to exactly one thread.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dunkl
