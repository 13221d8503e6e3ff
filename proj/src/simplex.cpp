#include "rck/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rck {

namespace {

// 1^T (z - nu 1)_{+,eps}
double shifted_sum(std::span<const double> z, double nu, double eps) {
  const std::size_t n = z.size();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += std::max(z[i] - nu, 0.0);
  s += std::max(z[n - 1] - nu, eps);
  return s;
}

}  // namespace

TruncatedSimplex::TruncatedSimplex(int n_, double eps_) : n(n_), eps(eps_) {
  if (n < 2) throw std::invalid_argument("TruncatedSimplex: need n >= 2");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("TruncatedSimplex: eps must be in [0,1]");
}

double bisect_nu(std::span<const double> z, const TruncatedSimplex& dom,
                 double tol) {
  if (static_cast<int>(z.size()) != dom.n)
    throw std::invalid_argument("bisect_nu: dimension mismatch");
  for (double x : z)
    if (!std::isfinite(x)) throw std::invalid_argument("bisect_nu: nonfinite input");

  const double zmax = *std::max_element(z.begin(), z.end());
  double lo = zmax - 1.0;  // h(lo) >= 1
  double hi = zmax;        // h(hi) = eps <= 1
  double nu = lo;
  for (int it = 0; it < 200; ++it) {
    nu = 0.5 * (lo + hi);
    const double h = shifted_sum(z, nu, dom.eps);
    if (std::abs(h - 1.0) <= tol) return nu;
    if (h > 1.0)
      lo = nu;
    else
      hi = nu;
    if (!(hi > lo)) break;  // interval collapsed to machine precision
  }
  // h has kinks; at machine-precision intervals the residual can sit just
  // above tol. The caller's exact active-set finish absorbs that.
  return nu;
}

BetVector project(std::span<const double> z, const TruncatedSimplex& dom) {
  if (static_cast<int>(z.size()) != dom.n)
    throw std::invalid_argument("project: dimension mismatch");
  const std::size_t n = z.size();

  // The projection is invariant to adding c*1 to the input (nu shifts by c).
  // Recenter so max(w) = 0: the bisection bracket becomes [-1, 0] and the
  // free coordinates land in (-1, 1], where the active-set finish below stays
  // exact even when the raw input is astronomically large (steep Lagrangian
  // gradients push iterates to ~1e60 and beyond, past the point where nu can
  // resolve a unit sum). Any coordinate with w <= -1 sits at its floor for
  // every nu in the bracket, so clamping it at -2 changes nothing and keeps
  // the subtraction overflow-free.
  double zmax = -std::numeric_limits<double>::infinity();
  for (double x : z) {
    if (!std::isfinite(x))
      throw std::invalid_argument("project: nonfinite input");
    zmax = std::max(zmax, x);
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::max(z[i] - zmax, -2.0);

  const double nu = bisect_nu(w, dom, 1e-13);
  std::vector<double> b(n);
  for (std::size_t i = 0; i + 1 < n; ++i) b[i] = std::max(w[i] - nu, 0.0);
  b[n - 1] = std::max(w[n - 1] - nu, dom.eps);

  // Exact finish: with the active set fixed by nu, the free coordinates of
  // the true projection are w_i - nu* where nu* re-centers their sum; this
  // removes the bisection residual so the output sums to 1 at roundoff
  // level.
  double free_sum = 0.0, pinned = 0.0;
  int free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double floor_i = (i + 1 == n) ? dom.eps : 0.0;
    if (b[i] > floor_i) {
      free_sum += w[i];
      ++free_count;
    } else {
      pinned += floor_i;
    }
  }
  if (free_count > 0) {
    const double shift = (free_sum - (1.0 - pinned)) / free_count;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double floor_i = (i + 1 == n) ? dom.eps : 0.0;
      if (b[i] > floor_i) b[i] = w[i] - shift;
      // a tiny shift change can push a borderline coordinate below its
      // floor; clamp, the error is within the bisection tolerance
      b[i] = std::max(b[i], floor_i);
      sum += b[i];
    }
    if (std::abs(sum - 1.0) > 1e-10) {
      // fall back to plain normalization of the slack above the floors
      double slack = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        slack += b[i] - ((i + 1 == n) ? dom.eps : 0.0);
      const double target = 1.0 - dom.eps;
      if (slack > 0.0 && target >= 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
          const double floor_i = (i + 1 == n) ? dom.eps : 0.0;
          b[i] = floor_i + (b[i] - floor_i) * (target / slack);
        }
      }
    }
  }
  return BetVector(std::move(b));
}

}  // namespace rck
