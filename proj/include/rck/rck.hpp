#pragma once

#include <cstdint>
#include <vector>

#include "rck/config.hpp"
#include "rck/kernels.hpp"
#include "rck/model.hpp"

namespace rck {

// Risk functional E (r.b)^(-lambda). Exact for the finite model, computed in
// log space (log-sum-exp) so large lambda neither overflows nor loses the
// comparison against 1. Returns +infinity if an outcome with positive
// probability has r.b == 0.
double risk_value(const FiniteOutcomeModel& m, const BetVector& b,
                  double lambda);
double log_risk_value(const FiniteOutcomeModel& m, const BetVector& b,
                      double lambda);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of the risk functional on a dedicated stream range.
McEstimate risk_value(const ReturnSampler& sampler, const BetVector& b,
                      double lambda, std::int64_t samples,
                      std::uint64_t stream_base, Exec exec = Exec::parallel);

// Drawdown certificate: a bet with E (r.b)^(-lambda) <= 1 guarantees
// P(minimum wealth < alpha) < alpha^lambda simultaneously for every alpha in
// (0,1); `bound` instantiates the guarantee at one alpha of interest.
struct DrawdownCertificate {
  bool certified = false;
  double lambda = 0.0;
  double risk_value = 0.0;
  double alpha = 0.0;
  double bound = 1.0;  // alpha^lambda when certified, vacuous 1 otherwise
};
DrawdownCertificate certify(double lambda, double alpha, double risk_value);

// First-order optimality report for the risk-constrained problem
//   maximize E log(r.b)  s.t.  E (r.b)^(-lambda) <= 1,  b in simplex.
// Measures primal feasibility, complementary slackness, and stationarity of
// the Lagrangian over the simplex: E[r_i/y] + kappa lambda E[r_i/y^(lambda+1)]
// must equal 1 + kappa lambda on the support of b and not exceed it off the
// support (y = r.b). max_residual is the largest of the three violations.
struct OptimalityResidual {
  double feasibility_gap = 0.0;
  double complementarity_gap = 0.0;
  double stationarity_gap = 0.0;
  double max_residual = 0.0;
  double risk_value = 0.0;
  std::vector<double> stationarity_lhs;  // per asset
  double stationarity_rhs = 0.0;         // 1 + kappa lambda
};
OptimalityResidual optimality_residual(const FiniteOutcomeModel& m,
                                       const BetVector& b, double kappa,
                                       double lambda,
                                       double support_tol = 1e-6);
OptimalityResidual optimality_residual(const ReturnSampler& sampler,
                                       const BetVector& b, double kappa,
                                       double lambda, std::int64_t samples,
                                       std::uint64_t stream_base,
                                       double support_tol = 1e-6,
                                       Exec exec = Exec::parallel);

// Two-outcome risk-constrained bet by scalar root finding. The constraint
// function phi(b1) = pi(1+b1(P-1))^(-lambda) + (1-pi)(1-b1)^(-lambda) - 1 is
// convex with phi(0) = 0, so when the Kelly bet violates the constraint the
// binding bet is the unique root of phi on the increasing branch left of the
// Kelly point; bisection drives |phi| below tol. The result is always a
// fractional-Kelly scaling of the unconstrained bet.
BetVector solve_rck_two_outcome(double pi, double P, double lambda,
                                double tol = 1e-12);

// Risk-constrained Kelly on a finite model. A short projected primal-dual
// warmup on the exact expectations locates the active set and the dual
// scale; the dual is then pinned by bisection on the monotone map
// kappa -> risk(argmax_b L(b, kappa)), with each inner maximization solved
// by projected gradient ascent, until the optimality residual clears
// cfg.kkt_tol.
SolveReport solve_rck(const FiniteOutcomeModel& m, double lambda,
                      const SolverConfig& cfg = SolverConfig::finite_defaults());

// Sampled variant: primal-dual projected stochastic gradient with step
// t_k = C/sqrt(k), dual clamp [0, M], and step-weighted averaging of both
// iterates over the tail half of the schedule (the burn-in carries the
// largest weights, so averaging it in would freeze the starting point).
// Growth/risk/residual in the report are held-out estimates.
SolveReport solve_rck(const ReturnSampler& sampler, double lambda,
                      const SolverConfig& cfg = SolverConfig::sampled_defaults());

// Small-lambda expansion of the risk constraint: (1/lambda) log E (r.b)^(-lambda)
// ~ -E log(r.b) + (lambda/2) Var log(r.b). Returns both sides so callers can
// see how close the regime is to mean-variance. At lambda = 0 both entries
// are the analytic limit -E log(r.b).
struct LightRegime {
  double exact = 0.0;      // (1/lambda) log E (r.b)^(-lambda)
  double expansion = 0.0;  // -E log(r.b) + (lambda/2) Var log(r.b)
};
LightRegime light_regime_approx(const FiniteOutcomeModel& m,
                                const BetVector& b, double lambda);

}  // namespace rck
