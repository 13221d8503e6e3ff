#pragma once

#include <cstdint>
#include <memory>

#include "rck/model.hpp"

namespace rck {

// Random finite instance in the style of the reference experiments:
// outcome probabilities drawn uniform on [0,1] and normalized; risky
// returns uniform on [0.7, 1.3]; then E cells set to 0.2 and another E
// disjoint cells set to 2.0, with E = round(30 K (n-1) / 1900) so the
// default (n=20, K=100) places exactly 30 of each. Cash column is 1.
FiniteOutcomeModel gen_finite(int n = 20, int K = 100, std::uint64_t seed = 0);

// Two-component lognormal mixture sampler: with probability 1/2 each,
// r_risky = exp(nu_k + L_k z), z standard normal, and r_n = 1 exactly.
// The parameter recipe (fixed convention of this artifact, derived
// deterministically from `seed`) opposes a bull and a bear regime:
// nu_1 entries uniform in [0.01, 0.15], nu_2 entries in [-0.11, 0.02];
// Sigma_k = (random PSD matrix scaled to spectral norm s_k u_k, u_k uniform
// in [0.5, 1], s = (0.04, 0.06)) + g_k^2 11^T with market volatilities
// g = (0.20, 0.34). Row/column n of Sigma_k and nu_kn are zero. The market
// factor makes the growth-optimal bet carry real drawdown risk: at the
// defaults, Kelly growth is 0.076 and the lambda = 6.456 constraint binds.
std::unique_ptr<ReturnSampler> gen_lognormal_mixture(int n = 20,
                                                     std::uint64_t seed = 0);

// K=2 transcription of the classic single-bet gamble: returns (P, 1) with
// probability pi and (0, 1) otherwise.
FiniteOutcomeModel gen_two_outcome(double pi, double P);

}  // namespace rck
