#pragma once

// Shared internals of the finite-model solvers: exact expectations of the
// log-growth objective, the power-utility risk term, and their gradients,
// all computed through u_k = log(r_k . b) so large risk exponents stay in
// range.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "rck/model.hpp"

namespace rck::detail {

inline constexpr double kExpClip = 300.0;

// u_k = log(r_k . b); -inf when the dot product is 0
inline void log_dots(const FiniteOutcomeModel& m, std::span<const double> b,
                     std::vector<double>& u) {
  const int K = m.num_outcomes();
  u.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double y = m.dot(k, b);
    u[static_cast<std::size_t>(k)] =
        y > 0.0 ? std::log(y) : -std::numeric_limits<double>::infinity();
  }
}

inline double growth_from_logs(const FiniteOutcomeModel& m,
                               std::span<const double> u) {
  double g = 0.0;
  for (int k = 0; k < m.num_outcomes(); ++k)
    g += m.prob(k) * u[static_cast<std::size_t>(k)];
  return g;
}

// log E (r.b)^(-lambda) via log-sum-exp of log pi_k - lambda u_k
inline double log_risk_from_logs(const FiniteOutcomeModel& m,
                                 std::span<const double> u, double lambda) {
  if (lambda == 0.0) return 0.0;  // E y^0 = 1 identically
  const int K = m.num_outcomes();
  constexpr double inf = std::numeric_limits<double>::infinity();
  double emax = -inf;
  std::vector<double> e(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double uk = u[static_cast<std::size_t>(k)];
    const double ek = uk == -inf ? inf : std::log(m.prob(k)) - lambda * uk;
    e[static_cast<std::size_t>(k)] = ek;
    emax = std::max(emax, ek);
  }
  if (emax == inf) return inf;
  double s = 0.0;
  for (double ek : e) s += std::exp(ek - emax);
  return emax + std::log(s);
}

inline double risk_from_logs(const FiniteOutcomeModel& m,
                             std::span<const double> u, double lambda) {
  return std::exp(log_risk_from_logs(m, u, lambda));  // +inf on ruin outcomes
}

// Gradient of the Lagrangian's ascent form, which is also the lhs vector of
// the per-asset stationarity conditions:
//   g_i = E[r_i/y] + kappa lambda E[r_i/y^(lambda+1)],  y = r.b.
inline void lagrangian_ascent_direction(const FiniteOutcomeModel& m,
                                        std::span<const double> u,
                                        double kappa, double lambda,
                                        std::vector<double>& g) {
  const int K = m.num_outcomes();
  const int n = m.dimension();
  g.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < K; ++k) {
    const double uk = u[static_cast<std::size_t>(k)];
    double coef = std::exp(std::min(-uk, kExpClip));
    if (kappa > 0.0 && lambda > 0.0)
      coef += kappa * lambda * std::exp(std::min(-(lambda + 1.0) * uk, kExpClip));
    coef *= m.prob(k);
    const auto r = m.outcome(k);
    for (int a = 0; a < n; ++a)
      g[static_cast<std::size_t>(a)] += coef * r[static_cast<std::size_t>(a)];
  }
}

}  // namespace rck::detail
