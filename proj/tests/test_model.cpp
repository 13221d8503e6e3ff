#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "rck/kelly.hpp"
#include "rck/model.hpp"

using rck::BetVector;
using rck::FiniteOutcomeModel;
using rck::FiniteModelSampler;

TEST_CASE("risk exponent from a drawdown target") {
  CHECK(rck::lambda_from_alpha_beta(0.7, 0.1) ==
        doctest::Approx(6.4557).epsilon(1.5e-4));
  // beta = alpha gives exponent 1; beta = alpha^2 gives exponent 2
  CHECK(rck::lambda_from_alpha_beta(0.5, 0.5) == doctest::Approx(1.0));
  CHECK(rck::lambda_from_alpha_beta(0.5, 0.25) == doctest::Approx(2.0));
  CHECK_THROWS_AS(rck::lambda_from_alpha_beta(0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(rck::lambda_from_alpha_beta(0.7, 1.0), std::domain_error);
  CHECK_THROWS_AS(rck::lambda_from_alpha_beta(1.0, 0.1), std::domain_error);
}

TEST_CASE("cdf bound instantiates alpha^lambda") {
  CHECK(rck::cdf_bound(6.456, 0.7) == doctest::Approx(0.100).epsilon(5e-3));
  CHECK(rck::cdf_bound(6.46, 0.5) == doctest::Approx(0.011).epsilon(5e-2));
  CHECK(rck::cdf_bound(0.0, 0.3) == doctest::Approx(1.0));
}

TEST_CASE("bet vector validation") {
  CHECK_NOTHROW(BetVector({0.25, 0.75}));
  CHECK_THROWS_AS(BetVector({0.5, 0.6}), std::invalid_argument);   // sum != 1
  CHECK_THROWS_AS(BetVector({-0.1, 1.1}), std::invalid_argument);  // negative
  CHECK_THROWS_AS(BetVector({1.0}), std::invalid_argument);        // n < 2
  const BetVector cash = BetVector::cash(4);
  CHECK(cash.dimension() == 4);
  CHECK(cash.cash_weight() == 1.0);
  CHECK(cash[0] == 0.0);
}

TEST_CASE("fractional scaling moves toward cash") {
  const BetVector b({0.4, 0.1, 0.5});
  const BetVector half = rck::fractional_kelly(b, 0.5);
  CHECK(half[0] == doctest::Approx(0.2));
  CHECK(half[1] == doctest::Approx(0.05));
  CHECK(half.cash_weight() == doctest::Approx(0.75));
  CHECK(rck::fractional_kelly(b, 1.0) == b);
  CHECK(rck::fractional_kelly(b, 0.0).cash_weight() == doctest::Approx(1.0));
  CHECK_THROWS_AS(rck::fractional_kelly(b, 1.5), std::domain_error);
}

TEST_CASE("finite model validation and expectations") {
  // two outcomes, two assets, cash column exactly 1
  const FiniteOutcomeModel m({0.6, 0.4}, {2.0, 1.0, 0.0, 1.0}, 2);
  CHECK(m.num_outcomes() == 2);
  CHECK(m.expected_return(0) == doctest::Approx(1.2));
  CHECK(m.expected_return(1) == doctest::Approx(1.0));
  const std::vector<double> b = {0.25, 0.75};
  CHECK(m.dot(0, b) == doctest::Approx(1.25));
  CHECK(m.dot(1, b) == doctest::Approx(0.75));

  // cash column must be exactly 1
  CHECK_THROWS_AS(FiniteOutcomeModel({0.5, 0.5}, {2.0, 1.0, 0.0, 0.9}, 2),
                  std::invalid_argument);
  // weights are normalized into probabilities, but each must be positive
  const FiniteOutcomeModel scaled({0.5, 0.6}, {2.0, 1.0, 0.0, 1.0}, 2);
  CHECK(scaled.prob(0) == doctest::Approx(0.5 / 1.1).epsilon(1e-14));
  CHECK(scaled.prob(1) == doctest::Approx(0.6 / 1.1).epsilon(1e-14));
  CHECK_THROWS_AS(FiniteOutcomeModel({1.0, 0.0}, {2.0, 1.0, 0.0, 1.0}, 2),
                  std::invalid_argument);
  // returns must be nonnegative
  CHECK_THROWS_AS(FiniteOutcomeModel({0.5, 0.5}, {-0.1, 1.0, 0.5, 1.0}, 2),
                  std::invalid_argument);
}

TEST_CASE("finite-model sampler draws the model's outcomes reproducibly") {
  const FiniteOutcomeModel m({0.6, 0.4}, {2.0, 1.0, 0.0, 1.0}, 2);
  const FiniteModelSampler s(m, 42);
  std::vector<double> a(10 * 2), b(10 * 2), prefix(4 * 2);
  s.draw(7, 10, a);
  s.draw(7, 10, b);
  CHECK(a == b);  // same (seed, stream, count) is bit-identical

  s.draw(7, 4, prefix);
  for (int i = 0; i < 8; ++i) CHECK(prefix[i] == a[i]);  // prefix property

  std::vector<double> other(10 * 2);
  s.draw(8, 10, other);
  CHECK(a != other);  // distinct streams differ

  // every sample is one of the model's outcomes, and frequencies are sane
  int wins = 0;
  const std::int64_t big = 20000;
  std::vector<double> lots(big * 2);
  s.draw(1, big, lots);
  for (std::int64_t k = 0; k < big; ++k) {
    const double r0 = lots[2 * k], r1 = lots[2 * k + 1];
    CHECK(r1 == 1.0);
    CHECK((r0 == 2.0 || r0 == 0.0));
    wins += r0 == 2.0;
  }
  const double freq = static_cast<double>(wins) / big;
  CHECK(freq == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("growth rate is the probability-weighted mean log return") {
  const FiniteOutcomeModel m({0.6, 0.4}, {2.0, 1.0, 0.0, 1.0}, 2);
  const BetVector b({0.2, 0.8});
  const double expect = 0.6 * std::log(1.2) + 0.4 * std::log(0.8);
  CHECK(rck::growth_rate(m, b) == doctest::Approx(expect).epsilon(1e-14));

  // a ruinous outcome with positive probability drives growth to -infinity
  const BetVector all_in({1.0, 0.0});
  CHECK(rck::growth_rate(m, all_in) ==
        -std::numeric_limits<double>::infinity());
}
