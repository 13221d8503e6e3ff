#include "rck/qrck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "rck/simplex.hpp"

namespace rck {

using detail::dot_n;
using detail::matvec;
using detail::spectral_norm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stationarity violation of max f over the simplex, from the gradient G at b:
// with tau = max_i G_i, optimality requires G_i = tau on the support of b.
double simplex_stationarity(std::span<const double> G, std::span<const double> b,
                            double support_tol) {
  double tau = -kInf;
  for (double gi : G) tau = std::max(tau, gi);
  double gap = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] > support_tol) gap = std::max(gap, tau - G[i]);
  return gap;
}

// Projected gradient (constant step 1/L) for the concave quadratic
//   max  a.b - (c/2) b.Q b   over the full simplex,
// run from the caller's b until the stationarity gap clears `target` or the
// iteration budget runs out. Returns the achieved gap.
double project_polish(std::span<const double> a, const std::vector<double>& Q,
                      double c, int n, const TruncatedSimplex& dom,
                      double q_norm, double support_tol, double target,
                      std::int64_t iters_cap, std::vector<double>& b,
                      std::int64_t& iters_used) {
  const double t = 1.0 / std::max(c * q_norm, 1e-8);
  std::vector<double> Qb, G(static_cast<std::size_t>(n)),
      z(static_cast<std::size_t>(n));
  double gap = kInf;
  for (std::int64_t k = 1; k <= iters_cap; ++k) {
    iters_used += 1;
    matvec(Q, b, n, Qb);
    for (int i = 0; i < n; ++i)
      G[static_cast<std::size_t>(i)] =
          a[static_cast<std::size_t>(i)] - c * Qb[static_cast<std::size_t>(i)];
    gap = simplex_stationarity(G, b, support_tol);
    if (gap <= target) break;
    for (int i = 0; i < n; ++i)
      z[static_cast<std::size_t>(i)] =
          b[static_cast<std::size_t>(i)] + t * G[static_cast<std::size_t>(i)];
    BetVector proj = project(z, dom);
    b.assign(proj.weights().begin(), proj.weights().end());
  }
  return gap;
}

MomentEstimate finish_moments(std::vector<double> mu, std::vector<double> s,
                              int n, std::int64_t sample_count) {
  // enforce exact symmetry, then Sigma = S - mu mu^T inherits it
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * n + j;
      const std::size_t ji = static_cast<std::size_t>(j) * n + i;
      const double avg = 0.5 * (s[ij] + s[ji]);
      s[ij] = avg;
      s[ji] = avg;
    }
  MomentEstimate mom;
  mom.sigma.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mom.sigma[static_cast<std::size_t>(i) * n + j] =
          s[static_cast<std::size_t>(i) * n + j] -
          mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
  mom.mu = std::move(mu);
  mom.s = std::move(s);
  mom.sample_count = sample_count;
  return mom;
}

}  // namespace

MomentEstimate estimate_moments(const FiniteOutcomeModel& m) {
  const int n = m.dimension();
  std::vector<double> mu(static_cast<std::size_t>(n), 0.0);
  std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> rho(static_cast<std::size_t>(n));
  for (int k = 0; k < m.num_outcomes(); ++k) {
    const auto r = m.outcome(k);
    const double p = m.prob(k);
    for (int i = 0; i < n; ++i)
      rho[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] - 1.0;
    for (int i = 0; i < n; ++i) {
      mu[static_cast<std::size_t>(i)] += p * rho[static_cast<std::size_t>(i)];
      const double pri = p * rho[static_cast<std::size_t>(i)];
      double* row = s.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) row[j] += pri * rho[static_cast<std::size_t>(j)];
    }
  }
  return finish_moments(std::move(mu), std::move(s), n, 0);
}

MomentEstimate estimate_moments(const ReturnSampler& sampler,
                                std::int64_t samples,
                                std::uint64_t stream_base, Exec exec) {
  if (samples <= 0)
    throw std::invalid_argument("estimate_moments: need samples > 0");
  const int n = sampler.dimension();
  const auto sums = kernels::accumulate_moments(sampler, stream_base, samples, exec);
  const double inv = 1.0 / static_cast<double>(sums.count);
  std::vector<double> mu(static_cast<std::size_t>(n));
  std::vector<double> s(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    mu[static_cast<std::size_t>(i)] = sums.sum_rho[static_cast<std::size_t>(i)] * inv;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = sums.sum_rho_outer[i] * inv;
  return finish_moments(std::move(mu), std::move(s), n, sums.count);
}

SolveReport solve_qrck(const MomentEstimate& mom, double lambda,
                       const SolverConfig& cfg) {
  if (!(lambda >= 0.0))
    throw std::domain_error("risk exponent lambda must be nonnegative");
  const int n = mom.dimension();
  if (n < 2 || static_cast<int>(mom.s.size()) != n * n)
    throw std::invalid_argument("solve_qrck: malformed moments");
  const TruncatedSimplex dom(n, 0.0);  // quadratic proxy runs on the full simplex

  SolveReport rep;
  rep.method = "qrck";
  rep.lambda = lambda;

  const double s_norm = spectral_norm(mom.s, n);
  const double target = 0.25 * cfg.kkt_tol;
  const std::int64_t inner_cap = cfg.max_iters;

  // Lagrangian at multiplier nu of the divided constraint
  //   q(b) = -mu.b + ((lambda+1)/2) b.S b <= 0
  // is (1+nu) mu.b - (1/2)(1+nu(lambda+1)) b.S b: an inner concave QP handled
  // by projected gradient; the scalar dual ascends by bisection on the
  // monotone dual derivative q(b*(nu)) (Uzawa iteration).
  std::vector<double> Sb;
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  b.back() = 1.0;  // cash start; degenerate objectives never move it
  double nu = 0.0;
  std::int64_t iters = 0;
  double stat_gap = kInf;

  auto inner_solve = [&](double nu_try) {
    const double c1 = 1.0 + nu_try;
    const double c2 = 1.0 + nu_try * (lambda + 1.0);
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      a[static_cast<std::size_t>(i)] = c1 * mom.mu[static_cast<std::size_t>(i)];
    stat_gap = project_polish(a, mom.s, c2, n, dom, s_norm, cfg.support_tol,
                              target, inner_cap, b, iters);
    matvec(mom.s, b, n, Sb);
    return -dot_n(mom.mu, b) + 0.5 * (lambda + 1.0) * dot_n(Sb, b);
  };

  double q = inner_solve(0.0);
  if (lambda > 0.0 && q > target) {
    // constraint active: bracket the dual root; q(b*(nu)) is nonincreasing
    double lo = 0.0, hi = cfg.dual_cap;
    double q_hi = inner_solve(hi);
    if (q_hi > 0.0) {
      nu = hi;  // cap too small to enforce the constraint; flagged below
      q = q_hi;
    } else {
      for (int it = 0; it < 200; ++it) {
        nu = 0.5 * (lo + hi);
        q = inner_solve(nu);
        if (std::abs(q) * std::max(1.0, nu) <= target || hi - lo < 1e-15 * (1.0 + hi))
          break;
        if (q > 0.0)
          lo = nu;
        else
          hi = nu;
      }
    }
  }

  const double feas = lambda > 0.0 ? std::max(0.0, q) : 0.0;
  const double comp = nu == 0.0 ? 0.0 : std::abs(nu * q);
  rep.bet = BetVector(std::vector<double>(b));
  rep.kappa = nu;
  rep.kkt_residual = std::max({feas, comp, stat_gap});
  rep.converged = rep.kkt_residual <= cfg.kkt_tol;
  rep.iterations = iters;

  matvec(mom.s, b, n, Sb);
  const double mu_b = dot_n(mom.mu, b);
  const double bSb = dot_n(Sb, b);
  rep.growth = mu_b - 0.5 * bSb;  // quadratic proxy of E log(r.b)
  // quadratic proxy of E (r.b)^(-lambda)
  rep.risk_value = 1.0 - lambda * mu_b + 0.5 * lambda * (lambda + 1.0) * bSb;
  rep.cash_floor_respected = true;
  rep.dual_in_range = rep.kappa < cfg.dual_cap;
  return rep;
}

SolveReport solve_markowitz(const MomentEstimate& mom, double gamma,
                            const SolverConfig& cfg) {
  if (!(gamma >= 0.0))
    throw std::domain_error("risk aversion gamma must be nonnegative");
  const int n = mom.dimension();
  if (n < 2 || static_cast<int>(mom.sigma.size()) != n * n)
    throw std::invalid_argument("solve_markowitz: malformed moments");
  const TruncatedSimplex dom(n, 0.0);

  SolveReport rep;
  rep.method = "markowitz";
  rep.lambda = 0.0;
  rep.kappa = gamma;  // records the trade-off parameter actually used

  const double sig_norm = spectral_norm(mom.sigma, n);
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  b.back() = 1.0;
  std::int64_t iters = 0;
  const double gap =
      project_polish(mom.mu, mom.sigma, gamma, n, dom, sig_norm,
                     cfg.support_tol, 0.25 * cfg.kkt_tol, cfg.max_iters, b,
                     iters);

  rep.bet = BetVector(std::vector<double>(b));
  rep.kkt_residual = gap;
  rep.converged = gap <= cfg.kkt_tol;
  rep.iterations = iters;
  std::vector<double> Qb;
  matvec(mom.sigma, b, n, Qb);
  rep.growth = dot_n(mom.mu, b) - 0.5 * gamma * dot_n(Qb, b);
  rep.risk_value = dot_n(Qb, b);  // portfolio variance b.Sigma b
  rep.cash_floor_respected = true;
  rep.dual_in_range = true;
  return rep;
}

double markowitz_gamma_of_qrck(const SolveReport& qrck_report,
                               const MomentEstimate& mom) {
  const double nu = qrck_report.kappa;
  const double lambda = qrck_report.lambda;
  if (!(nu >= 0.0))
    throw std::domain_error("markowitz_gamma_of_qrck: negative multiplier");
  const double eta = (1.0 + nu * (lambda + 1.0)) / (1.0 + nu);
  const double mu_b = dot_n(mom.mu, qrck_report.bet.weights());
  const double denom = 1.0 - eta * mu_b;
  if (denom <= 1e-9)
    throw std::domain_error(
        "markowitz_gamma_of_qrck: mu.b* >= 1/eta, the no-arbitrage premise of "
        "the equivalence fails on these moments");
  return eta / denom;
}

}  // namespace rck
