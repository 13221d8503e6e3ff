#pragma once

#include <span>

#include "rck/model.hpp"

namespace rck {

// Feasible set for all solvers: the simplex with a floor eps on the cash
// component, { b : 1.b = 1, b >= 0, b_n >= eps }. The floor keeps log and
// power utilities finite on the whole set (r_n = 1 surely, so r.b >= eps).
struct TruncatedSimplex {
  TruncatedSimplex(int n, double eps);

  int n;
  double eps;
};

// Root of h(nu) = sum_i clip(z - nu)_i = 1, where clip applies max(., 0) to
// the first n-1 components and max(., eps) to the last. h is continuous and
// nonincreasing, with h(max z - 1) >= 1 and h(max z) <= max(eps, 0) < 1, so
// bisection on that bracket converges unconditionally.
double bisect_nu(std::span<const double> z, const TruncatedSimplex& dom,
                 double tol = 1e-13);

// Euclidean projection onto the truncated simplex: clip(z - nu* 1) with nu*
// from bisect_nu. Exact sum is restored by a final active-set correction, so
// the output always satisfies the BetVector validity contract.
BetVector project(std::span<const double> z, const TruncatedSimplex& dom);

}  // namespace rck
