// Times the three bulk kernels in their serial-reference and OpenMP-parallel
// forms and cross-checks that the two produce bit-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rck/instances.hpp"
#include "rck/kernels.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
  const auto t0 = clock_type::now();
  f();
  return seconds_since(t0);
}

int g_mismatches = 0;

void check(bool same, const char* what) {
  if (!same) {
    ++g_mismatches;
    std::printf("MISMATCH: %s differs between serial and parallel\n", what);
  }
}

}  // namespace

int main() {
  using namespace rck;

  const int n = 20;
  const std::int64_t samples = 200000;
  const std::int64_t trajectories = 20000;
  const int steps = 99;
  const double lambda = 5.5;

  const auto sampler = gen_lognormal_mixture(n, /*seed=*/7);
  std::vector<double> bet(n, 0.5 / (n - 1));
  bet.back() = 0.5;

#ifdef _OPENMP
  std::printf("threads available: %d\n", omp_get_max_threads());
#else
  std::printf("compiled without OpenMP\n");
#endif
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial (s)", "parallel (s)",
              "speedup");

  kernels::MomentSums ms, mp;
  const double t_ms = timed([&] {
    ms = kernels::accumulate_moments(*sampler, 0, samples, Exec::serial);
  });
  const double t_mp = timed([&] {
    mp = kernels::accumulate_moments(*sampler, 0, samples, Exec::parallel);
  });
  check(ms.sum_rho == mp.sum_rho && ms.sum_rho_outer == mp.sum_rho_outer,
        "accumulate_moments");
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "accumulate_moments", t_ms, t_mp,
              t_ms / t_mp);

  kernels::BetEvaluation es, ep;
  const double t_es = timed([&] {
    es = kernels::evaluate_bet(*sampler, bet, lambda, 0, samples, Exec::serial);
  });
  const double t_ep = timed([&] {
    ep = kernels::evaluate_bet(*sampler, bet, lambda, 0, samples, Exec::parallel);
  });
  check(es.growth_mean == ep.growth_mean && es.risk_mean == ep.risk_mean &&
            es.inv_moment == ep.inv_moment &&
            es.risk_inv_moment == ep.risk_inv_moment,
        "evaluate_bet");
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "evaluate_bet", t_es, t_ep,
              t_es / t_ep);

  std::vector<double> wmin_s(trajectories), wfin_s(trajectories);
  std::vector<double> wmin_p(trajectories), wfin_p(trajectories);
  const double t_ss = timed([&] {
    kernels::simulate_paths(*sampler, bet, steps, 0, wmin_s, wfin_s,
                            Exec::serial);
  });
  const double t_sp = timed([&] {
    kernels::simulate_paths(*sampler, bet, steps, 0, wmin_p, wfin_p,
                            Exec::parallel);
  });
  check(wmin_s == wmin_p && wfin_s == wfin_p, "simulate_paths");
  std::printf("%-22s %12.4f %12.4f %8.2fx\n", "simulate_paths", t_ss, t_sp,
              t_ss / t_sp);

  if (g_mismatches == 0) std::printf("serial and parallel outputs identical\n");
  return g_mismatches == 0 ? 0 : 1;
}
