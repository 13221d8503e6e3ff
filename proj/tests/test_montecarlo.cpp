#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "rck/instances.hpp"
#include "rck/kelly.hpp"
#include "rck/montecarlo.hpp"
#include "rck/rck.hpp"

using rck::BetVector;
using rck::SimulationPlan;

TEST_CASE("simulation plans are validated up front") {
  const auto m = rck::gen_two_outcome(0.6, 2.0);
  const BetVector b({0.2, 0.8});
  SimulationPlan plan;
  plan.trajectories = 0;
  CHECK_THROWS_AS(rck::simulate(m, b, plan), std::invalid_argument);
  plan = SimulationPlan{};
  plan.horizon = 0;
  CHECK_THROWS_AS(rck::simulate(m, b, plan), std::invalid_argument);
  plan = SimulationPlan{};
  plan.alpha_grid = {0.5, 1.0};
  CHECK_THROWS_AS(rck::simulate(m, b, plan), std::invalid_argument);
  plan = SimulationPlan{};
  CHECK_THROWS_AS(rck::simulate(m, BetVector({0.1, 0.2, 0.7}), plan),
                  std::invalid_argument);
}

TEST_CASE("serial and parallel trajectories are bitwise identical") {
  const auto m = rck::gen_finite(6, 30, 2);
  const auto kelly = rck::solve_kelly(m);
  SimulationPlan plan;
  plan.trajectories = 5000;  // not a multiple of the kernel block size
  plan.horizon = 60;
  plan.seed = 7;
  const auto a = rck::simulate(m, kelly.bet, plan, rck::Exec::serial);
  const auto b = rck::simulate(m, kelly.bet, plan, rck::Exec::parallel);
  REQUIRE(a.min_wealth.size() == b.min_wealth.size());
  for (std::size_t j = 0; j < a.min_wealth.size(); ++j) {
    CHECK(a.min_wealth[j] == b.min_wealth[j]);
    CHECK(a.final_log_wealth[j] == b.final_log_wealth[j]);
  }
  CHECK(a.growth_estimate == b.growth_estimate);
}

TEST_CASE("the all-cash bet never draws down") {
  const auto m = rck::gen_two_outcome(0.6, 2.0);
  SimulationPlan plan;
  plan.trajectories = 200;
  plan.horizon = 50;
  const auto stats = rck::simulate(m, BetVector::cash(2), plan);
  CHECK(stats.growth_estimate == 0.0);
  CHECK(stats.growth_std_error == 0.0);
  for (double w : stats.min_wealth) CHECK(w == 1.0);
  for (const auto& r : stats.drawdown_risk) {
    CHECK(r.probability == 0.0);  // strict inequality: W_min = 1 < alpha never
    CHECK(r.std_error == 0.0);
  }
  CHECK(stats.risk_at(0.999).probability == 0.0);
}

TEST_CASE("drawdown probability is monotone in the threshold and the horizon") {
  const auto m = rck::gen_finite(6, 30, 2);
  const auto kelly = rck::solve_kelly(m);
  SimulationPlan plan;
  plan.trajectories = 4000;
  plan.horizon = 100;
  plan.seed = 11;
  const auto stats = rck::simulate(m, kelly.bet, plan);

  double prev = -1.0;
  for (double alpha : {0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double p = stats.risk_at(alpha).probability;
    CHECK(p >= prev);
    prev = p;
  }

  // same seed, longer run: each path's minimum can only fall, so the
  // exceedance probabilities are pathwise monotone in the horizon
  SimulationPlan longer = plan;
  longer.horizon = 200;
  const auto more = rck::simulate(m, kelly.bet, longer);
  for (std::size_t j = 0; j < stats.min_wealth.size(); ++j)
    CHECK(more.min_wealth[j] <= stats.min_wealth[j]);
  for (double alpha : {0.5, 0.7, 0.9})
    CHECK(more.risk_at(alpha).probability >= stats.risk_at(alpha).probability);
}

TEST_CASE("ruinous bets report zero minimum wealth and -inf growth") {
  const auto m = rck::gen_two_outcome(0.6, 2.0);
  SimulationPlan plan;
  plan.trajectories = 500;
  plan.horizon = 80;
  // the full-stake bet is wiped out by the first losing outcome
  const auto stats = rck::simulate(m, BetVector({1.0, 0.0}), plan);
  const bool any_ruin = std::any_of(stats.min_wealth.begin(),
                                    stats.min_wealth.end(),
                                    [](double w) { return w == 0.0; });
  CHECK(any_ruin);  // P(no loss in 79 steps) = 0.6^79, never seen in practice
  CHECK(stats.growth_estimate == -std::numeric_limits<double>::infinity());
  CHECK(stats.risk_at(0.5).probability >= 0.99);
}

TEST_CASE("simulated growth agrees with the exact expectation") {
  const auto m = rck::gen_finite(6, 30, 2);
  const auto kelly = rck::solve_kelly(m);
  SimulationPlan plan;
  plan.trajectories = 20000;
  plan.horizon = 100;
  plan.seed = 13;
  const auto stats = rck::simulate(m, kelly.bet, plan);
  const double exact = rck::growth_rate(m, kelly.bet);
  CHECK(std::abs(stats.growth_estimate - exact) <=
        4.0 * stats.growth_std_error + 1e-9);
}

TEST_CASE("feasible bets empirically satisfy the drawdown bound") {
  const auto m = rck::gen_finite(10, 50, 4);
  const double lambda = 5.5;
  const auto rep = rck::solve_rck(m, lambda);
  REQUIRE(rep.converged);
  REQUIRE(rep.risk_value <= 1.0 + 1e-8);
  SimulationPlan plan;
  plan.trajectories = 10000;
  plan.horizon = 100;
  plan.seed = 17;
  const auto stats = rck::simulate(m, rep.bet, plan);
  const auto val = rck::validate_bound(stats, lambda);
  CHECK(val.all_consistent);
  REQUIRE(val.checks.size() == plan.alpha_grid.size());
  for (const auto& c : val.checks) {
    CHECK(c.bound == doctest::Approx(std::pow(c.alpha, lambda)).epsilon(1e-12));
    CHECK(c.margin == doctest::Approx(c.bound - c.empirical).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rck::validate_bound(stats, -2.0), std::domain_error);
}

TEST_CASE("an infeasible bet is flagged by the bound check") {
  // the growth-optimal bet on a double-or-nothing gamble draws down far more
  // often than the lambda = 6.456 budget allows
  const auto m = rck::gen_two_outcome(0.6, 2.0);
  const auto kelly = rck::solve_kelly(m);
  SimulationPlan plan;
  plan.trajectories = 10000;
  plan.horizon = 100;
  const auto stats = rck::simulate(m, kelly.bet, plan);
  const auto val = rck::validate_bound(stats, 6.455696235812881);
  CHECK_FALSE(val.all_consistent);
}

TEST_CASE("frontier rows are deterministic, ordered, and anchored by Kelly") {
  const auto m = rck::gen_finite(6, 30, 2);
  SimulationPlan plan;
  plan.trajectories = 2000;
  plan.horizon = 60;
  plan.seed = 5;
  const std::vector<double> lambdas = {4.0, 6.455696235812881};
  const std::vector<double> fractions = {0.25, 0.5, 1.0};
  const auto rows = rck::frontier(m, lambdas, fractions, 0.7, plan);
  REQUIRE(rows.size() == 1 + 2 * lambdas.size() + fractions.size());

  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].risk >= rows[i - 1].risk);

  int kelly_rows = 0, certified = 0;
  for (const auto& row : rows) {
    CHECK(row.converged);
    if (row.method == "kelly") ++kelly_rows;
    if (row.method == "rck") {
      CHECK(row.bound ==
            doctest::Approx(std::pow(0.7, row.param)).epsilon(1e-12));
      ++certified;
    }
    if (row.method == "fractional" && row.param == 1.0) {
      // f = 1 is the Kelly bet itself, simulated under the same plan
      const auto kelly_it =
          std::find_if(rows.begin(), rows.end(),
                       [](const rck::FrontierRow& r) { return r.method == "kelly"; });
      REQUIRE(kelly_it != rows.end());
      CHECK(row.growth == kelly_it->growth);
      CHECK(row.risk == kelly_it->risk);
    }
  }
  CHECK(kelly_rows == 1);
  CHECK(certified == 2);

  // repeat run is byte-for-byte reproducible
  const auto again = rck::frontier(m, lambdas, fractions, 0.7, plan);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].method == rows[i].method);
    CHECK(again[i].growth == rows[i].growth);
    CHECK(again[i].risk == rows[i].risk);
  }
}
