#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rck {

// Risk exponent lambda = log(beta) / log(alpha) for the drawdown target
// "P(minimum wealth < alpha) < beta" with alpha, beta in (0, 1).
double lambda_from_alpha_beta(double alpha, double beta);

// The drawdown bound implied by a feasible bet with exponent lambda:
// P(minimum wealth < alpha) < alpha^lambda, valid for every alpha in (0, 1).
double cdf_bound(double lambda, double alpha);

// A bet vector on the probability simplex: nonnegative weights summing to 1
// (within 1e-9), with the last component the cash position.
class BetVector {
 public:
  explicit BetVector(std::vector<double> weights);

  // all-cash bet e_n
  static BetVector cash(int n);

  int dimension() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  std::span<const double> weights() const { return w_; }
  double cash_weight() const { return w_.back(); }

  bool operator==(const BetVector&) const = default;

 private:
  std::vector<double> w_;
};

// Convex combination f * b + (1 - f) * e_n, f in [0, 1] ("fractional Kelly"
// when b is the growth-optimal bet).
BetVector fractional_kelly(const BetVector& b, double f);

// Finite outcome distribution: K outcomes with probabilities pi_i > 0 summing
// to 1, each outcome a return vector r_i >= 0 whose last component (cash)
// equals 1 exactly.
class FiniteOutcomeModel {
 public:
  // returns_row_major has num_outcomes * dimension entries
  FiniteOutcomeModel(std::vector<double> probs,
                     std::vector<double> returns_row_major, int dimension);

  int dimension() const { return n_; }
  int num_outcomes() const { return static_cast<int>(probs_.size()); }
  double prob(int k) const { return probs_[static_cast<std::size_t>(k)]; }
  std::span<const double> outcome(int k) const {
    return {returns_.data() + static_cast<std::size_t>(k) * n_,
            static_cast<std::size_t>(n_)};
  }
  std::span<const double> probs() const { return probs_; }
  std::span<const double> returns() const { return returns_; }

  // E r_i for asset i
  double expected_return(int asset) const;

  // r_k . b for outcome k
  double dot(int k, std::span<const double> b) const;

 private:
  std::vector<double> probs_;
  std::vector<double> returns_;  // row major, num_outcomes x dimension
  int n_;
};

// Drawdown risk specification. Either a bare exponent lambda >= 0 or a pair
// (alpha, beta) that fixes lambda = log(beta)/log(alpha). lambda == 0 means
// unconstrained (pure Kelly).
struct RiskSpec {
  double lambda = 0.0;
  bool has_target = false;  // true when built from an (alpha, beta) pair
  double alpha = 0.0;
  double beta = 0.0;

  static RiskSpec from_lambda(double lambda);
  static RiskSpec from_alpha_beta(double alpha, double beta);
};

// Result of a solve, with enough diagnostics to audit optimality and
// feasibility after the fact. For finite models growth/risk are exact
// expectations and the std errors are zero; for sampled problems they are
// held-out Monte Carlo estimates.
struct SolveReport {
  BetVector bet{BetVector::cash(2)};
  double lambda = 0.0;
  double kappa = 0.0;  // multiplier of the risk constraint
  double growth = 0.0;
  double growth_std_error = 0.0;
  double risk_value = 0.0;  // E (r.b)^(-lambda)
  double risk_std_error = 0.0;
  double kkt_residual = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  bool cash_floor_respected = true;  // bet stayed in the truncated simplex
  bool dual_in_range = true;         // kappa stayed strictly below its cap
  std::string method;
};

// Source of i.i.d. return vectors for sampled problems. Implementations must
// be deterministic functions of (seed, stream, count): the same triple yields
// the same samples, and a longer draw from the same stream extends a shorter
// one. Thread-safe for concurrent draws on distinct streams.
class ReturnSampler {
 public:
  virtual ~ReturnSampler() = default;
  virtual int dimension() const = 0;
  virtual std::uint64_t seed() const = 0;
  // Fill out (count * dimension, row major) with samples from `stream`.
  virtual void draw(std::uint64_t stream, std::int64_t count,
                    std::span<double> out) const = 0;
  virtual std::string describe() const = 0;
};

// Samples outcomes of a finite model by inverse-CDF lookup; useful for
// validating the stochastic solvers against exact finite solutions.
class FiniteModelSampler final : public ReturnSampler {
 public:
  FiniteModelSampler(FiniteOutcomeModel model, std::uint64_t seed);

  int dimension() const override { return model_.dimension(); }
  std::uint64_t seed() const override { return seed_; }
  void draw(std::uint64_t stream, std::int64_t count,
            std::span<double> out) const override;
  std::string describe() const override { return "finite"; }

  const FiniteOutcomeModel& model() const { return model_; }

 private:
  FiniteOutcomeModel model_;
  std::vector<double> cdf_;
  std::uint64_t seed_;
};

}  // namespace rck
