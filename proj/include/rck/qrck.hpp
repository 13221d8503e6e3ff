#pragma once

#include <cstdint>
#include <vector>

#include "rck/config.hpp"
#include "rck/kernels.hpp"
#include "rck/model.hpp"

namespace rck {

// First and second moments of the excess return rho = r - 1: mu = E rho,
// Sigma its covariance, and S = E rho rho^T = Sigma + mu mu^T. Row/column n
// is exactly zero (cash has no excess return). sample_count is 0 when the
// moments are exact finite-model expectations.
struct MomentEstimate {
  std::vector<double> mu;     // length n
  std::vector<double> sigma;  // covariance, n x n row major
  std::vector<double> s;      // raw second moment, n x n row major
  std::int64_t sample_count = 0;

  int dimension() const { return static_cast<int>(mu.size()); }
};

// Exact pi-weighted moments of a finite model (sample_count = 0).
MomentEstimate estimate_moments(const FiniteOutcomeModel& m);
// Empirical moments from `samples` draws, symmetrized so S and Sigma are
// exactly symmetric despite floating-point accumulation.
MomentEstimate estimate_moments(const ReturnSampler& sampler,
                                std::int64_t samples,
                                std::uint64_t stream_base,
                                Exec exec = Exec::parallel);

// Quadratic proxy of the risk-constrained Kelly problem:
//   maximize  mu.b - (1/2) b.S b
//   s.t.      -lambda mu.b + (lambda(lambda+1)/2) b.S b <= 0,  b in simplex.
// Solved by deterministic projected primal-dual gradient on the quadratic
// forms. report.kappa holds nu = lambda * kappa_c with kappa_c the
// multiplier of the raw constraint; nu is the multiplier in the dualized
// form  mu.b - (1/2)b.S b + nu(mu.b - ((lambda+1)/2) b.S b)  that the
// Markowitz equivalence consumes. report.risk_value carries the quadratic
// approximation of E(r.b)^(-lambda): 1 - lambda mu.b + (lambda(lambda+1)/2) b.S b.
SolveReport solve_qrck(const MomentEstimate& mom, double lambda,
                       const SolverConfig& cfg = SolverConfig::finite_defaults());

// Classic long-only Markowitz trade-off over the simplex:
//   maximize mu.b - (gamma/2) b.Sigma b.
SolveReport solve_markowitz(const MomentEstimate& mom, double gamma,
                            const SolverConfig& cfg = SolverConfig::finite_defaults());

// Risk-aversion parameter gamma at which solve_markowitz reproduces the
// quadratic-proxy bet: with nu the recovered multiplier and
// eta = (1 + nu(lambda+1)) / (1 + nu),  gamma = eta / (1 - eta mu.b*).
// Requires eta mu.b* < 1, which the no-arbitrage property guarantees;
// throws std::domain_error when it fails.
double markowitz_gamma_of_qrck(const SolveReport& qrck_report,
                               const MomentEstimate& mom);

}  // namespace rck
