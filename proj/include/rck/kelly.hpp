#pragma once

#include "rck/config.hpp"
#include "rck/model.hpp"

namespace rck {

// Expected log growth E log(r.b). Exact sum for the finite model; outcomes
// with r.b == 0 contribute -infinity (weighted by their probability).
double growth_rate(const FiniteOutcomeModel& m, const BetVector& b);

// Closed-form growth-optimal bet for the single even-payoff gamble: win
// returns P > 1 with probability pi, loss returns 0, cash returns 1. The
// optimum is b1 = (pi P - 1)/(P - 1) when pi P > 1, otherwise all cash.
BetVector solve_kelly_two_outcome(double pi, double P);

// Betting helps iff some expected return exceeds 1: when E r_i <= 1 for
// every risky i, the growth optimum (constrained or not) is all cash. Lets
// the solvers short-circuit to the exact corner solution.
bool no_bet_is_optimal(const FiniteOutcomeModel& m);

// Growth-optimal bet over the truncated simplex by deterministic projected
// gradient ascent on the exact expectation.
SolveReport solve_kelly(const FiniteOutcomeModel& m,
                        const SolverConfig& cfg = SolverConfig::finite_defaults());

// Growth-optimal bet from samples: projected stochastic gradient ascent
// with steps t_k = C/sqrt(k) and step-weighted iterate averaging over the
// tail half of the schedule. Reported growth is a held-out estimate on a
// stream disjoint from training.
SolveReport solve_kelly(const ReturnSampler& sampler,
                        const SolverConfig& cfg = SolverConfig::sampled_defaults());

}  // namespace rck
