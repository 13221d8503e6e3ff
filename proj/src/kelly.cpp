#include "rck/kelly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "finite_eval.hpp"
#include "pd_solver.hpp"

namespace rck {

double growth_rate(const FiniteOutcomeModel& m, const BetVector& b) {
  if (b.dimension() != m.dimension())
    throw std::invalid_argument("bet dimension does not match model");
  std::vector<double> u;
  detail::log_dots(m, b.weights(), u);
  return detail::growth_from_logs(m, u);
}

BetVector solve_kelly_two_outcome(double pi, double P) {
  if (!(pi >= 0.0 && pi <= 1.0))
    throw std::domain_error("win probability must lie in [0,1]");
  if (!(P > 0.0)) throw std::domain_error("payoff must be positive");
  const double edge = pi * P - 1.0;  // edge > 0 implies P > 1
  if (edge <= 0.0) return BetVector({0.0, 1.0});
  const double b1 = edge / (P - 1.0);
  return BetVector({b1, 1.0 - b1});
}

bool no_bet_is_optimal(const FiniteOutcomeModel& m) {
  for (int i = 0; i + 1 < m.dimension(); ++i)
    if (m.expected_return(i) > 1.0) return false;
  return true;
}

SolveReport solve_kelly(const FiniteOutcomeModel& m, const SolverConfig& cfg) {
  return detail::pd_solve_finite(m, 0.0, cfg, "kelly");
}

SolveReport solve_kelly(const ReturnSampler& sampler, const SolverConfig& cfg) {
  return detail::pd_solve_sampled(sampler, 0.0, cfg, "kelly");
}

}  // namespace rck
