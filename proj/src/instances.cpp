#include "rck/instances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "rck/rng.hpp"

namespace rck {

namespace {

// Two-component lognormal mixture: with probability 1/2 each, risky returns
// are exp(nu_k + L_k z) with z standard normal; cash returns exactly 1. The
// components play a bull regime (drifts in [0.01, 0.15]) against a bear
// regime (drifts in [-0.11, 0.02]), and each covariance is a random
// idiosyncratic part (spectral norm 0.04 bull / 0.06 bear, scaled by a
// U[0.5,1] draw) plus an equal-loading market factor (volatility 0.20 bull /
// 0.34 bear).  The market factor cannot be diversified away, which keeps the
// growth-optimal bet exposed to drawdowns: at the default dimension 20 and
// seed 0, the growth-optimal growth rate is 0.076 and the risk constraint at
// lambda = 6.456 binds, cutting growth to 0.040.  All parameters are a
// deterministic function of the seed, drawn once from the dedicated
// parameter stream.
class LognormalMixtureSampler final : public ReturnSampler {
 public:
  LognormalMixtureSampler(int n, std::uint64_t seed) : n_(n), seed_(seed) {
    if (n < 2)
      throw std::invalid_argument("mixture sampler: need dimension >= 2");
    const int m = n - 1;  // risky assets
    Substream rng(seed, streams::kInstanceParamBase);
    const double drift_lo[2] = {0.01, -0.11};
    const double drift_hi[2] = {0.15, 0.02};
    const double idio_norm[2] = {0.04, 0.06};
    const double market_vol[2] = {0.20, 0.34};
    for (int k = 0; k < 2; ++k) {
      nu_[k].resize(static_cast<std::size_t>(m));
      for (auto& x : nu_[k]) x = rng.uniform(drift_lo[k], drift_hi[k]);
      // random PSD matrix A^T A / m rescaled to a target spectral norm
      std::vector<double> a(static_cast<std::size_t>(m) * m);
      for (auto& x : a) x = rng.next_normal();
      std::vector<double> cov(static_cast<std::size_t>(m) * m, 0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
          double s = 0.0;
          for (int k2 = 0; k2 < m; ++k2)
            s += a[static_cast<std::size_t>(k2) * m + i] *
                 a[static_cast<std::size_t>(k2) * m + j];
          s /= m;
          cov[static_cast<std::size_t>(i) * m + j] = s;
          cov[static_cast<std::size_t>(j) * m + i] = s;
        }
      const double target = idio_norm[k] * rng.uniform(0.5, 1.0);
      const double norm = detail::spectral_norm(cov, m);
      const double scale = norm > 0.0 ? target / norm : 0.0;
      for (auto& x : cov) x *= scale;
      const double g2 = market_vol[k] * market_vol[k];
      for (auto& x : cov) x += g2;  // rank-one market factor, equal loadings
      for (int i = 0; i < m; ++i)
        cov[static_cast<std::size_t>(i) * m + i] += 1e-12;
      chol_[k] = detail::cholesky(cov, m);
    }
  }

  int dimension() const override { return n_; }
  std::uint64_t seed() const override { return seed_; }

  void draw(std::uint64_t stream, std::int64_t count,
            std::span<double> out) const override {
    const int m = n_ - 1;
    if (static_cast<std::int64_t>(out.size()) !=
        count * static_cast<std::int64_t>(n_))
      throw std::invalid_argument("mixture sampler: bad output size");
    Substream rng(seed_, stream);
    std::vector<double> z(static_cast<std::size_t>(m));
    for (std::int64_t s = 0; s < count; ++s) {
      const int k = rng.next_double() < 0.5 ? 0 : 1;
      for (auto& x : z) x = rng.next_normal();
      double* r = out.data() + static_cast<std::size_t>(s) * n_;
      const auto& L = chol_[k];
      for (int i = 0; i < m; ++i) {
        double e = nu_[k][static_cast<std::size_t>(i)];
        for (int j = 0; j <= i; ++j)
          e += L[static_cast<std::size_t>(i) * m + j] *
               z[static_cast<std::size_t>(j)];
        r[i] = std::exp(e);
      }
      r[m] = 1.0;
    }
  }

  std::string describe() const override { return "mixture"; }

 private:
  int n_;
  std::uint64_t seed_;
  std::vector<double> nu_[2];
  std::vector<double> chol_[2];  // lower factors, (n-1) x (n-1)
};

}  // namespace

FiniteOutcomeModel gen_finite(int n, int K, std::uint64_t seed) {
  if (n < 2 || K < 1)
    throw std::invalid_argument("gen_finite: need n >= 2 and K >= 1");
  const int m = n - 1;
  Substream rng(seed, streams::kInstanceParamBase);

  std::vector<double> probs(static_cast<std::size_t>(K));
  for (auto& p : probs) {
    do p = rng.next_double();
    while (p == 0.0);
  }

  std::vector<double> returns(static_cast<std::size_t>(K) * n);
  for (int k = 0; k < K; ++k) {
    double* row = returns.data() + static_cast<std::size_t>(k) * n;
    for (int i = 0; i < m; ++i) row[i] = rng.uniform(0.7, 1.3);
    row[m] = 1.0;
  }

  // sprinkle crash (0.2) and jackpot (2.0) cells over disjoint positions of
  // the K x (n-1) risky block, 30-per-1900-cells density
  const std::int64_t cells = static_cast<std::int64_t>(K) * m;
  const std::int64_t e =
      std::llround(30.0 * static_cast<double>(cells) / 1900.0);
  const std::int64_t picks = std::min(2 * e, cells);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(cells));
  for (std::int64_t i = 0; i < cells; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (std::int64_t i = 0; i < picks; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(rng.next_u64() %
                                      static_cast<std::uint64_t>(cells - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    const std::int64_t cell = idx[static_cast<std::size_t>(i)];
    const std::int64_t k = cell / m;
    const std::int64_t col = cell % m;
    returns[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(col)] =
        i < e ? 0.2 : 2.0;
  }

  return FiniteOutcomeModel(std::move(probs), std::move(returns), n);
}

std::unique_ptr<ReturnSampler> gen_lognormal_mixture(int n,
                                                     std::uint64_t seed) {
  return std::make_unique<LognormalMixtureSampler>(n, seed);
}

FiniteOutcomeModel gen_two_outcome(double pi, double P) {
  if (!(pi > 0.0 && pi < 1.0))
    throw std::domain_error("gen_two_outcome: win probability must be in (0,1)");
  if (!(P > 0.0)) throw std::domain_error("gen_two_outcome: payoff must be positive");
  return FiniteOutcomeModel({pi, 1.0 - pi}, {P, 1.0, 0.0, 1.0}, 2);
}

}  // namespace rck
