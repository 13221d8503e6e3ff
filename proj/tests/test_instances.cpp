#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "rck/instances.hpp"
#include "rck/model.hpp"

TEST_CASE("random finite instances satisfy the model contract") {
  const auto m = rck::gen_finite(20, 100, 0);
  REQUIRE(m.dimension() == 20);
  REQUIRE(m.num_outcomes() == 100);

  double psum = 0.0;
  for (int k = 0; k < m.num_outcomes(); ++k) {
    CHECK(m.prob(k) > 0.0);
    psum += m.prob(k);
  }
  CHECK(std::abs(psum - 1.0) <= 1e-12);

  int crashes = 0, jumps = 0;
  for (int k = 0; k < m.num_outcomes(); ++k) {
    const auto r = m.outcome(k);
    CHECK(r[19] == 1.0);  // cash column exact
    for (int i = 0; i < 19; ++i) {
      const double v = r[static_cast<std::size_t>(i)];
      const bool base = v >= 0.7 && v <= 1.3;
      if (v == 0.2) ++crashes;
      if (v == 2.0) ++jumps;
      CHECK((base || v == 0.2 || v == 2.0));
    }
  }
  // E = round(30 * 100 * 19 / 1900) = 30 cells of each kind, disjoint
  CHECK(crashes == 30);
  CHECK(jumps == 30);
}

TEST_CASE("extreme-cell count scales with the instance size") {
  const auto m = rck::gen_finite(5, 38, 3);  // E = round(30*38*4/1900) = 2.4 -> 2
  int crashes = 0, jumps = 0;
  for (int k = 0; k < m.num_outcomes(); ++k) {
    const auto r = m.outcome(k);
    for (int i = 0; i < 4; ++i) {
      if (r[static_cast<std::size_t>(i)] == 0.2) ++crashes;
      if (r[static_cast<std::size_t>(i)] == 2.0) ++jumps;
    }
  }
  CHECK(crashes == 2);
  CHECK(jumps == 2);
}

TEST_CASE("finite instances are reproducible and seed-sensitive") {
  const auto a = rck::gen_finite(6, 30, 42);
  const auto b = rck::gen_finite(6, 30, 42);
  const auto c = rck::gen_finite(6, 30, 43);
  REQUIRE(a.returns().size() == b.returns().size());
  bool identical = true, differs = false;
  for (std::size_t i = 0; i < a.returns().size(); ++i) {
    identical = identical && a.returns()[i] == b.returns()[i];
    differs = differs || a.returns()[i] != c.returns()[i];
  }
  for (std::size_t k = 0; k < a.probs().size(); ++k)
    identical = identical && a.probs()[k] == b.probs()[k];
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("two-outcome transcription and its validation") {
  const auto m = rck::gen_two_outcome(0.6, 2.0);
  REQUIRE(m.dimension() == 2);
  REQUIRE(m.num_outcomes() == 2);
  CHECK(m.prob(0) == 0.6);
  CHECK(m.prob(1) == 0.4);
  CHECK(m.outcome(0)[0] == 2.0);
  CHECK(m.outcome(0)[1] == 1.0);
  CHECK(m.outcome(1)[0] == 0.0);
  CHECK(m.outcome(1)[1] == 1.0);
  CHECK_THROWS_AS(rck::gen_two_outcome(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rck::gen_two_outcome(1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rck::gen_two_outcome(0.5, 0.0), std::domain_error);
}

TEST_CASE("mixture sampler honors the sampler determinism contract") {
  const auto s = rck::gen_lognormal_mixture(5, 9);
  REQUIRE(s->dimension() == 5);
  CHECK(s->seed() == 9);
  CHECK(s->describe() == "mixture");

  std::vector<double> big(5 * 64), small(5 * 16), other(5 * 16);
  s->draw(3, 64, big);
  s->draw(3, 16, small);
  s->draw(4, 16, other);

  // prefix property: a shorter draw from the same stream is a prefix
  for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == big[i]);
  // distinct streams decorrelate
  bool differs = false;
  for (std::size_t i = 0; i < other.size(); ++i)
    differs = differs || other[i] != small[i];
  CHECK(differs);

  // cash column is exactly 1, risky returns strictly positive (lognormal)
  for (std::size_t row = 0; row < 64; ++row) {
    CHECK(big[5 * row + 4] == 1.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(big[5 * row + i] > 0.0);
  }

  // a fresh object with the same key replays the same samples
  const auto s2 = rck::gen_lognormal_mixture(5, 9);
  std::vector<double> replay(5 * 64);
  s2->draw(3, 64, replay);
  for (std::size_t i = 0; i < big.size(); ++i) CHECK(replay[i] == big[i]);
}

TEST_CASE("mixture regimes produce distinguishable samples") {
  // bull regime drifts up, bear regime drifts down; over many draws the
  // per-sample average risky return should straddle 1 from both sides
  const auto s = rck::gen_lognormal_mixture(10, 0);
  const std::int64_t count = 4000;
  std::vector<double> buf(static_cast<std::size_t>(10 * count));
  s->draw(0, count, buf);
  int up = 0, down = 0;
  for (std::int64_t row = 0; row < count; ++row) {
    double avg = 0.0;
    for (int i = 0; i < 9; ++i)
      avg += buf[static_cast<std::size_t>(10 * row + i)] / 9.0;
    if (avg > 1.02) ++up;
    if (avg < 0.98) ++down;
  }
  CHECK(up > count / 10);
  CHECK(down > count / 10);
}
