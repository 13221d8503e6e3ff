#include "rck/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rck/rng.hpp"

namespace rck {

namespace {

constexpr double kSumTol = 1e-9;
constexpr double kProbTol = 1e-12;
constexpr double kCashTol = 1e-12;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

double lambda_from_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("lambda_from_alpha_beta: alpha must be in (0,1)");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::domain_error("lambda_from_alpha_beta: beta must be in (0,1)");
  return std::log(beta) / std::log(alpha);
}

double cdf_bound(double lambda, double alpha) {
  if (!(lambda >= 0.0))
    throw std::domain_error("cdf_bound: lambda must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("cdf_bound: alpha must be in (0,1)");
  return std::pow(alpha, lambda);
}

BetVector::BetVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.size() < 2) throw std::invalid_argument("BetVector: need n >= 2");
  if (!all_finite(w_)) throw std::invalid_argument("BetVector: nonfinite weight");
  double sum = 0.0;
  for (double& x : w_) {
    if (x < 0.0) {
      if (x < -kSumTol) throw std::invalid_argument("BetVector: negative weight");
      x = 0.0;  // clamp roundoff-level negatives
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw std::invalid_argument("BetVector: weights must sum to 1");
}

BetVector BetVector::cash(int n) {
  if (n < 2) throw std::invalid_argument("BetVector::cash: need n >= 2");
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  w.back() = 1.0;
  return BetVector(std::move(w));
}

BetVector fractional_kelly(const BetVector& b, double f) {
  if (!(f >= 0.0 && f <= 1.0))
    throw std::domain_error("fractional_kelly: f must be in [0,1]");
  std::vector<double> w(b.weights().begin(), b.weights().end());
  for (double& x : w) x *= f;
  w.back() += 1.0 - f;
  return BetVector(std::move(w));
}

FiniteOutcomeModel::FiniteOutcomeModel(std::vector<double> probs,
                                       std::vector<double> returns_row_major,
                                       int dimension)
    : probs_(std::move(probs)), returns_(std::move(returns_row_major)),
      n_(dimension) {
  if (n_ < 2) throw std::invalid_argument("FiniteOutcomeModel: need n >= 2");
  if (probs_.empty()) throw std::invalid_argument("FiniteOutcomeModel: need K >= 1");
  if (returns_.size() != probs_.size() * static_cast<std::size_t>(n_))
    throw std::invalid_argument("FiniteOutcomeModel: returns shape mismatch");
  if (!all_finite(probs_) || !all_finite(returns_))
    throw std::invalid_argument("FiniteOutcomeModel: nonfinite entry");

  // normalize probabilities, then validate; when the input already sums to 1
  // at roundoff level, keep it bit-for-bit so a serialized model reloads
  // without drifting by an ulp
  double sum = 0.0;
  for (double p : probs_) {
    if (p <= 0.0) throw std::invalid_argument("FiniteOutcomeModel: probs must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    for (double& p : probs_) p /= sum;
  double check = 0.0;
  for (double p : probs_) check += p;
  if (std::abs(check - 1.0) > kProbTol)
    throw std::invalid_argument("FiniteOutcomeModel: probabilities failed to normalize");

  for (std::size_t k = 0; k < probs_.size(); ++k) {
    for (int j = 0; j < n_; ++j) {
      double& r = returns_[k * static_cast<std::size_t>(n_) +
                           static_cast<std::size_t>(j)];
      if (r < 0.0) throw std::invalid_argument("FiniteOutcomeModel: negative return");
      if (j == n_ - 1) {
        if (std::abs(r - 1.0) > kCashTol)
          throw std::invalid_argument("FiniteOutcomeModel: cash column must be 1");
        r = 1.0;  // snap roundoff so the invariant is exact
      }
    }
  }
}

double FiniteOutcomeModel::expected_return(int asset) const {
  double e = 0.0;
  for (int k = 0; k < num_outcomes(); ++k)
    e += probs_[static_cast<std::size_t>(k)] * outcome(k)[static_cast<std::size_t>(asset)];
  return e;
}

double FiniteOutcomeModel::dot(int k, std::span<const double> b) const {
  const double* row = returns_.data() + static_cast<std::size_t>(k) * n_;
  double y = 0.0;
  for (int j = 0; j < n_; ++j) y += row[j] * b[static_cast<std::size_t>(j)];
  return y;
}

RiskSpec RiskSpec::from_lambda(double lambda) {
  if (!(lambda >= 0.0))
    throw std::domain_error("RiskSpec: lambda must be nonnegative");
  RiskSpec s;
  s.lambda = lambda;
  return s;
}

RiskSpec RiskSpec::from_alpha_beta(double alpha, double beta) {
  RiskSpec s;
  s.lambda = lambda_from_alpha_beta(alpha, beta);
  s.has_target = true;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

FiniteModelSampler::FiniteModelSampler(FiniteOutcomeModel model,
                                       std::uint64_t seed)
    : model_(std::move(model)), seed_(seed) {
  cdf_.reserve(static_cast<std::size_t>(model_.num_outcomes()));
  double acc = 0.0;
  for (int k = 0; k < model_.num_outcomes(); ++k) {
    acc += model_.prob(k);
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

void FiniteModelSampler::draw(std::uint64_t stream, std::int64_t count,
                              std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(model_.dimension());
  if (out.size() != n * static_cast<std::size_t>(count))
    throw std::invalid_argument("FiniteModelSampler::draw: bad output size");
  Substream rng(seed_, stream);
  for (std::int64_t j = 0; j < count; ++j) {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const int k = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1));
    const auto row = model_.outcome(k);
    std::copy(row.begin(), row.end(),
              out.begin() + static_cast<std::size_t>(j) * n);
  }
}

}  // namespace rck
