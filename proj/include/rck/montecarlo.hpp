#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rck/config.hpp"
#include "rck/kernels.hpp"
#include "rck/model.hpp"

namespace rck {

// What to simulate: trajectory count, horizon T in periods (wealth states
// w_1 = 1 .. w_T, i.e. T-1 multiplicative steps), the grid of drawdown
// levels alpha at which to estimate P(W_min < alpha), and the RNG identity.
// Trajectory j draws from stream stream_offset + j of `seed`, so results
// are reproducible and independent of scheduling.
struct SimulationPlan {
  std::int64_t trajectories = 10000;
  int horizon = 100;
  std::vector<double> alpha_grid = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::uint64_t seed = 0;
  std::uint64_t stream_offset = 0;
};

struct RiskEstimate {
  double alpha = 0.0;
  double probability = 0.0;  // empirical P(W_min < alpha), strict inequality
  double std_error = 0.0;    // binomial
};

// Per-trajectory outcomes plus the statistics derived from them. min_wealth
// includes the starting wealth w_1 = 1 (so it never exceeds 1, and a ruined
// trajectory reports 0). growth_estimate is mean log(w_T) / (T-1).
struct TrajectoryStats {
  std::vector<double> min_wealth;        // per trajectory
  std::vector<double> final_log_wealth;  // per trajectory
  std::vector<double> cdf;               // min_wealth, sorted ascending
  std::vector<RiskEstimate> drawdown_risk;  // at plan.alpha_grid, sorted
  double growth_estimate = 0.0;
  double growth_std_error = 0.0;
  SimulationPlan plan;
  std::string generator;

  // empirical P(W_min < alpha) with binomial standard error
  RiskEstimate risk_at(double alpha) const;
};

TrajectoryStats simulate(const ReturnSampler& sampler, const BetVector& b,
                         const SimulationPlan& plan,
                         Exec exec = Exec::parallel);
// Convenience overload: wraps the model in a FiniteModelSampler seeded from
// the plan.
TrajectoryStats simulate(const FiniteOutcomeModel& m, const BetVector& b,
                         const SimulationPlan& plan,
                         Exec exec = Exec::parallel);

// Empirical check of the drawdown guarantee: at every alpha in the plan's
// grid, empirical P(W_min < alpha) should stay below alpha^lambda.
// margin = bound - empirical (positive is good); `consistent` allows a
// 3-standard-error Monte Carlo allowance.
struct BoundCheck {
  double alpha = 0.0;
  double bound = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double margin = 0.0;
  bool consistent = true;
};
struct BoundValidation {
  double lambda = 0.0;
  std::vector<BoundCheck> checks;
  bool all_consistent = true;
};
BoundValidation validate_bound(const TrajectoryStats& stats, double lambda);

// One point on the growth/drawdown-risk trade-off: `method` is "kelly",
// "rck", "qrck", or "fractional"; param is lambda for the solvers and the
// fraction f for fractional Kelly. growth and risk are simulated estimates
// under the shared plan; bound is alpha^lambda for certified solver bets
// and the vacuous 1 otherwise.
struct FrontierRow {
  std::string method;
  double param = 0.0;
  double growth = 0.0;
  double growth_std_error = 0.0;
  double risk = 0.0;  // empirical P(W_min < alpha)
  double risk_std_error = 0.0;
  double bound = 1.0;
  bool converged = true;
};

// Sweeps lambda for the exact and quadratic-proxy solvers and f for
// fractional Kelly (relative to the Kelly optimum), simulating every bet
// under the same plan. Rows are sorted by increasing empirical risk, ties
// broken by method then parameter, so the output order is deterministic.
// Solver non-convergence is propagated as a flagged row, not a failure.
std::vector<FrontierRow> frontier(const FiniteOutcomeModel& m,
                                  const std::vector<double>& lambdas,
                                  const std::vector<double>& fractions,
                                  double alpha, const SimulationPlan& plan,
                                  const SolverConfig& cfg = SolverConfig::finite_defaults(),
                                  Exec exec = Exec::parallel);
// Sampled variant: solvers run in their stochastic form and the bound column
// is certified from a held-out Monte Carlo risk estimate.
std::vector<FrontierRow> frontier(const ReturnSampler& sampler,
                                  const std::vector<double>& lambdas,
                                  const std::vector<double>& fractions,
                                  double alpha, const SimulationPlan& plan,
                                  const SolverConfig& cfg = SolverConfig::sampled_defaults(),
                                  Exec exec = Exec::parallel);

}  // namespace rck
