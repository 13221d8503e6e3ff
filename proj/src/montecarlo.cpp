#include "rck/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rck/kelly.hpp"
#include "rck/qrck.hpp"
#include "rck/rck.hpp"
#include "rck/rng.hpp"

namespace rck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_plan(const SimulationPlan& plan) {
  if (plan.trajectories < 1)
    throw std::invalid_argument("simulation needs at least one trajectory");
  if (plan.horizon < 1)
    throw std::invalid_argument("simulation horizon must be >= 1 period");
  for (double a : plan.alpha_grid)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("drawdown thresholds must lie in (0,1)");
}

}  // namespace

RiskEstimate TrajectoryStats::risk_at(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("drawdown threshold must lie in (0,1)");
  const auto lo = std::lower_bound(cdf.begin(), cdf.end(), alpha);
  const double count = static_cast<double>(lo - cdf.begin());
  const double total = static_cast<double>(cdf.size());
  RiskEstimate est;
  est.alpha = alpha;
  est.probability = count / total;
  est.std_error =
      std::sqrt(est.probability * (1.0 - est.probability) / total);
  return est;
}

TrajectoryStats simulate(const ReturnSampler& sampler, const BetVector& b,
                         const SimulationPlan& plan, Exec exec) {
  validate_plan(plan);
  if (b.dimension() != sampler.dimension())
    throw std::invalid_argument("bet dimension does not match sampler");

  TrajectoryStats stats;
  stats.plan = plan;
  stats.generator = sampler.describe();
  const std::size_t N = static_cast<std::size_t>(plan.trajectories);
  stats.min_wealth.resize(N);
  stats.final_log_wealth.resize(N);
  kernels::simulate_paths(sampler, b.weights(), plan.horizon - 1,
                          plan.stream_offset, stats.min_wealth,
                          stats.final_log_wealth, exec);

  stats.cdf = stats.min_wealth;
  std::sort(stats.cdf.begin(), stats.cdf.end());

  std::vector<double> grid = plan.alpha_grid;
  std::sort(grid.begin(), grid.end());
  stats.drawdown_risk.reserve(grid.size());
  for (double a : grid) stats.drawdown_risk.push_back(stats.risk_at(a));

  const double steps = static_cast<double>(std::max(1, plan.horizon - 1));
  double mean = 0.0;
  for (double v : stats.final_log_wealth) mean += v;
  mean /= static_cast<double>(N);
  if (std::isfinite(mean)) {
    double var = 0.0;
    for (double v : stats.final_log_wealth) var += (v - mean) * (v - mean);
    var = N > 1 ? var / static_cast<double>(N - 1) : 0.0;
    stats.growth_estimate = mean / steps;
    stats.growth_std_error = std::sqrt(var / static_cast<double>(N)) / steps;
  } else {
    stats.growth_estimate = -kInf;  // some trajectory was ruined
    stats.growth_std_error = kInf;
  }
  return stats;
}

TrajectoryStats simulate(const FiniteOutcomeModel& m, const BetVector& b,
                         const SimulationPlan& plan, Exec exec) {
  return simulate(FiniteModelSampler(m, plan.seed), b, plan, exec);
}

BoundValidation validate_bound(const TrajectoryStats& stats, double lambda) {
  if (!(lambda >= 0.0))
    throw std::domain_error("risk exponent lambda must be nonnegative");
  BoundValidation val;
  val.lambda = lambda;
  val.checks.reserve(stats.drawdown_risk.size());
  for (const RiskEstimate& est : stats.drawdown_risk) {
    BoundCheck c;
    c.alpha = est.alpha;
    c.bound = cdf_bound(lambda, est.alpha);
    c.empirical = est.probability;
    c.std_error = est.std_error;
    c.margin = c.bound - c.empirical;
    c.consistent = c.empirical < c.bound + 3.0 * est.std_error;
    val.all_consistent = val.all_consistent && c.consistent;
    val.checks.push_back(c);
  }
  return val;
}

std::vector<FrontierRow> frontier(const FiniteOutcomeModel& m,
                                  const std::vector<double>& lambdas,
                                  const std::vector<double>& fractions,
                                  double alpha, const SimulationPlan& plan,
                                  const SolverConfig& cfg, Exec exec) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("drawdown threshold must lie in (0,1)");
  validate_plan(plan);

  std::vector<FrontierRow> rows;
  const MomentEstimate mom = estimate_moments(m);

  auto add_row = [&](const std::string& method, double param,
                     const BetVector& bet, double lambda, bool converged) {
    const TrajectoryStats stats = simulate(m, bet, plan, exec);
    const RiskEstimate est = stats.risk_at(alpha);
    FrontierRow row;
    row.method = method;
    row.param = param;
    row.growth = stats.growth_estimate;
    row.growth_std_error = stats.growth_std_error;
    row.risk = est.probability;
    row.risk_std_error = est.std_error;
    // certified bound alpha^lambda only when the exact risk constraint holds
    const DrawdownCertificate cert =
        lambda > 0.0 ? certify(lambda, alpha, risk_value(m, bet, lambda))
                     : DrawdownCertificate{};
    row.bound = lambda > 0.0 && cert.certified ? cert.bound : 1.0;
    row.converged = converged;
    rows.push_back(row);
  };

  const SolveReport kelly = solve_kelly(m, cfg);
  add_row("kelly", 0.0, kelly.bet, 0.0, kelly.converged);

  for (double lam : lambdas) {
    const SolveReport rck_rep = solve_rck(m, lam, cfg);
    add_row("rck", lam, rck_rep.bet, lam, rck_rep.converged);
    const SolveReport qp = solve_qrck(mom, lam, cfg);
    add_row("qrck", lam, qp.bet, lam, qp.converged);
  }
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("fractional-Kelly fractions must lie in [0,1]");
    add_row("fractional", f, fractional_kelly(kelly.bet, f), 0.0,
            kelly.converged);
  }

  std::sort(rows.begin(), rows.end(),
            [](const FrontierRow& a, const FrontierRow& b) {
              if (a.risk != b.risk) return a.risk < b.risk;
              if (a.method != b.method) return a.method < b.method;
              return a.param < b.param;
            });
  return rows;
}

std::vector<FrontierRow> frontier(const ReturnSampler& sampler,
                                  const std::vector<double>& lambdas,
                                  const std::vector<double>& fractions,
                                  double alpha, const SimulationPlan& plan,
                                  const SolverConfig& cfg, Exec exec) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("drawdown threshold must lie in (0,1)");
  validate_plan(plan);

  std::vector<FrontierRow> rows;

  auto add_row = [&](const std::string& method, double param,
                     const BetVector& bet, double lambda, bool converged) {
    const TrajectoryStats stats = simulate(sampler, bet, plan, exec);
    const RiskEstimate est = stats.risk_at(alpha);
    FrontierRow row;
    row.method = method;
    row.param = param;
    row.growth = stats.growth_estimate;
    row.growth_std_error = stats.growth_std_error;
    row.risk = est.probability;
    row.risk_std_error = est.std_error;
    if (lambda > 0.0) {
      const McEstimate rv = risk_value(sampler, bet, lambda, cfg.eval_samples,
                                       streams::kHeldOutBase, exec);
      const DrawdownCertificate cert = certify(lambda, alpha, rv.mean);
      row.bound = cert.certified ? cert.bound : 1.0;
    }
    row.converged = converged;
    rows.push_back(row);
  };

  const SolveReport kelly = solve_kelly(sampler, cfg);
  add_row("kelly", 0.0, kelly.bet, 0.0, kelly.converged);

  const MomentEstimate mom =
      estimate_moments(sampler, cfg.eval_samples, streams::kMomentBase, exec);
  for (double lam : lambdas) {
    const SolveReport rck_rep = solve_rck(sampler, lam, cfg);
    add_row("rck", lam, rck_rep.bet, lam, rck_rep.converged);
    const SolveReport qp = solve_qrck(mom, lam);
    add_row("qrck", lam, qp.bet, lam, qp.converged);
  }
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("fractional-Kelly fractions must lie in [0,1]");
    add_row("fractional", f, fractional_kelly(kelly.bet, f), 0.0,
            kelly.converged);
  }

  std::sort(rows.begin(), rows.end(),
            [](const FrontierRow& a, const FrontierRow& b) {
              if (a.risk != b.risk) return a.risk < b.risk;
              if (a.method != b.method) return a.method < b.method;
              return a.param < b.param;
            });
  return rows;
}

}  // namespace rck
