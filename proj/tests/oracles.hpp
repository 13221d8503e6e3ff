#pragma once

// Independent reference implementations used to cross-check the production
// code: dense grid searches, active-set enumeration, and scalar scans.
// Deliberately simple and slow; correctness over speed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rck/model.hpp"

namespace oracle {

// argmax over a uniform grid of the two-outcome growth
// pi log(1 + b(P-1)) + (1-pi) log(1-b), b in [0, 1).
inline double grid_kelly_two_outcome(double pi, double P, double step = 1e-5) {
  double best_b = 0.0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (double b = 0.0; b < 1.0; b += step) {
    const double v =
        pi * std::log1p(b * (P - 1.0)) + (1.0 - pi) * std::log1p(-b);
    if (v > best_v) {
      best_v = v;
      best_b = b;
    }
  }
  return best_b;
}

// Rightmost b1 <= kelly_b1 satisfying the two-outcome risk constraint,
// located by scanning down from the growth optimum in `step` decrements.
// phi is convex with phi(0) = 0, so the first non-positive value marks the
// root to within one step.
inline double scan_rck_two_outcome(double pi, double P, double lambda,
                                   double kelly_b1, double step = 1e-6) {
  auto phi = [&](double b) {
    return pi * std::pow(1.0 + b * (P - 1.0), -lambda) +
           (1.0 - pi) * std::pow(1.0 - b, -lambda) - 1.0;
  };
  if (phi(kelly_b1) <= 0.0) return kelly_b1;
  double b = kelly_b1;
  while (b > 0.0 && phi(b) > 0.0) b -= step;
  return std::max(b, 0.0);
}

// Euclidean projection onto { b : sum b = 1, b_i >= 0 (i < n-1), b_n >= eps }
// by dense enumeration of clamp patterns. Every candidate is primal feasible
// and the true projection's pattern is among them, so the distance minimizer
// is exact (up to the scalar arithmetic).
inline std::vector<double> project_enumerated(const std::vector<double>& z,
                                              double eps) {
  const int n = static_cast<int>(z.size());
  double best_d = std::numeric_limits<double>::infinity();
  std::vector<double> best(z.size(), 0.0);
  std::vector<double> cand(z.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int free_cnt = 0;
    double zsum = 0.0, floor_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double floor_i = i == n - 1 ? eps : 0.0;
      if (mask & (1u << i))
        floor_sum += floor_i;
      else {
        ++free_cnt;
        zsum += z[static_cast<std::size_t>(i)];
      }
    }
    if (free_cnt == 0) continue;
    const double nu = (zsum + floor_sum - 1.0) / free_cnt;
    bool feasible = true;
    double dist = 0.0;
    for (int i = 0; i < n && feasible; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      const double floor_i = i == n - 1 ? eps : 0.0;
      const double bi = (mask & (1u << i)) ? floor_i : z[ii] - nu;
      if (bi < floor_i - 1e-14) feasible = false;
      cand[ii] = bi;
      const double d = z[ii] - bi;
      dist += d * d;
    }
    if (feasible && dist < best_d) {
      best_d = dist;
      best = cand;
    }
  }
  return best;
}

// Best feasible growth of a 3-asset model over a dense simplex grid with the
// exact risk constraint checked pointwise. Grid optima are lower bounds on
// the true optimum, which is the direction the comparisons need.
struct GridBest {
  double growth = -std::numeric_limits<double>::infinity();
  std::vector<double> bet;
};
inline GridBest grid_rck_3asset(const rck::FiniteOutcomeModel& m,
                                double lambda, int divisions = 400) {
  GridBest best;
  const int K = m.num_outcomes();
  std::vector<double> b(3);
  for (int i = 0; i <= divisions; ++i) {
    for (int j = 0; j <= divisions - i; ++j) {
      b[0] = static_cast<double>(i) / divisions;
      b[1] = static_cast<double>(j) / divisions;
      b[2] = 1.0 - b[0] - b[1];
      double growth = 0.0, risk = 0.0;
      bool ruined = false;
      for (int k = 0; k < K && !ruined; ++k) {
        const auto r = m.outcome(k);
        const double y = r[0] * b[0] + r[1] * b[1] + r[2] * b[2];
        if (y <= 0.0) {
          ruined = true;
          break;
        }
        const double u = std::log(y);
        growth += m.prob(k) * u;
        risk += m.prob(k) * std::exp(-lambda * u);
      }
      if (ruined) continue;
      if ((lambda == 0.0 || risk <= 1.0 + 1e-12) && growth > best.growth) {
        best.growth = growth;
        best.bet = b;
      }
    }
  }
  return best;
}

}  // namespace oracle
