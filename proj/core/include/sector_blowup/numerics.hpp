#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sector_blowup {

// Compensated (Kahan) accumulator. Panel sums and diagnostics reductions go
// through this so results are independent of chunking.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Composite quadrature of samples on a uniform grid of spacing h.
// Simpson where the interval count allows, with a 3/8 block to absorb an odd
// interval count; falls back to the trapezoid rule for fewer than 3 points.
double integrate_uniform(const std::vector<double>& v, double h);

// Integrate v[i0..i1] (inclusive node range) of a uniform grid.
double integrate_uniform_range(const std::vector<double>& v, double h,
                               std::size_t i0, std::size_t i1);

// Thomas algorithm for a tridiagonal system. diag/rhs have size n,
// lower/upper size n-1. Throws on a vanishing pivot.
std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                      std::vector<double> diag,
                                      std::vector<double> upper,
                                      std::vector<double> rhs);

// Fornberg finite-difference weights: derivative of order m at x0 from
// arbitrary nodes x. Returns one weight per node.
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of given order (1..16).
const GaussRule& gauss_legendre(int order);

// Chunked parallel map-reduce with max reduction; the reduction is
// order-independent so the result does not depend on the worker count.
double parallel_max(std::size_t n, int threads,
                    const std::function<double(std::size_t, std::size_t)>& chunk_max);

int default_thread_count();

}  // namespace sector_blowup
