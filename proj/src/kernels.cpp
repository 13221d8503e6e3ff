#include "rck/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rck::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp clip keeping squares finite: e^300 squared is ~1e260
constexpr double kExpClip = 300.0;

double pow_neg(double log_y, double expo) {  // y^(-expo) from log y
  return std::exp(std::min(-expo * log_y, kExpClip));
}

struct MomentBlock {
  std::vector<double> rho;
  std::vector<double> outer;
};

struct EvalBlock {
  double sv = 0.0, svv = 0.0, sq = 0.0, sqq = 0.0;
  std::vector<double> sa, sc;
};

std::int64_t block_count(std::int64_t count) {
  return (count + kBlockSamples - 1) / kBlockSamples;
}

}  // namespace

MomentSums accumulate_moments(const ReturnSampler& sampler,
                              std::uint64_t stream_base, std::int64_t count,
                              Exec exec) {
  const int n = sampler.dimension();
  const std::int64_t nblocks = block_count(count);
  std::vector<MomentBlock> parts(static_cast<std::size_t>(nblocks));

  auto run_block = [&](std::int64_t blk) {
    const std::int64_t lo = blk * kBlockSamples;
    const std::int64_t m = std::min<std::int64_t>(kBlockSamples, count - lo);
    std::vector<double> buf(static_cast<std::size_t>(m) * n);
    sampler.draw(stream_base + static_cast<std::uint64_t>(blk), m, buf);
    MomentBlock& out = parts[static_cast<std::size_t>(blk)];
    out.rho.assign(static_cast<std::size_t>(n), 0.0);
    out.outer.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (std::int64_t j = 0; j < m; ++j) {
      const double* r = buf.data() + static_cast<std::size_t>(j) * n;
      for (int a = 0; a < n; ++a) {
        const double ra = r[a] - 1.0;
        out.rho[static_cast<std::size_t>(a)] += ra;
        double* row = out.outer.data() + static_cast<std::size_t>(a) * n;
        for (int b = 0; b < n; ++b) row[b] += ra * (r[b] - 1.0);
      }
    }
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) run_block(blk);
  } else {
    for (std::int64_t blk = 0; blk < nblocks; ++blk) run_block(blk);
  }

  // fixed-order fold: results do not depend on thread count
  MomentSums sums;
  sums.sum_rho.assign(static_cast<std::size_t>(n), 0.0);
  sums.sum_rho_outer.assign(static_cast<std::size_t>(n) * n, 0.0);
  sums.count = count;
  for (const MomentBlock& p : parts) {
    for (std::size_t i = 0; i < sums.sum_rho.size(); ++i)
      sums.sum_rho[i] += p.rho[i];
    for (std::size_t i = 0; i < sums.sum_rho_outer.size(); ++i)
      sums.sum_rho_outer[i] += p.outer[i];
  }
  return sums;
}

BetEvaluation evaluate_bet(const ReturnSampler& sampler,
                           std::span<const double> bet, double lambda,
                           std::uint64_t stream_base, std::int64_t count,
                           Exec exec) {
  const int n = sampler.dimension();
  if (static_cast<int>(bet.size()) != n)
    throw std::invalid_argument("evaluate_bet: dimension mismatch");
  const std::int64_t nblocks = block_count(count);
  std::vector<EvalBlock> parts(static_cast<std::size_t>(nblocks));

  auto run_block = [&](std::int64_t blk) {
    const std::int64_t lo = blk * kBlockSamples;
    const std::int64_t m = std::min<std::int64_t>(kBlockSamples, count - lo);
    std::vector<double> buf(static_cast<std::size_t>(m) * n);
    sampler.draw(stream_base + static_cast<std::uint64_t>(blk), m, buf);
    EvalBlock& out = parts[static_cast<std::size_t>(blk)];
    out.sa.assign(static_cast<std::size_t>(n), 0.0);
    out.sc.assign(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t j = 0; j < m; ++j) {
      const double* r = buf.data() + static_cast<std::size_t>(j) * n;
      double y = 0.0;
      for (int a = 0; a < n; ++a) y += r[a] * bet[static_cast<std::size_t>(a)];
      if (y <= 0.0) {
        out.sv = -kInf;            // growth ruined
        out.sq = kInf;             // risk blown
        out.sqq = kInf;
        for (int a = 0; a < n; ++a)
          if (r[a] > 0.0) out.sa[static_cast<std::size_t>(a)] = kInf;
        continue;
      }
      const double v = std::log(y);
      const double q = pow_neg(v, lambda);
      out.sv += v;
      out.svv += v * v;
      out.sq += q;
      out.sqq += q * q;
      const double inv = 1.0 / y;
      const double rinv = pow_neg(v, lambda + 1.0);
      for (int a = 0; a < n; ++a) {
        out.sa[static_cast<std::size_t>(a)] += r[a] * inv;
        out.sc[static_cast<std::size_t>(a)] += r[a] * rinv;
      }
    }
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) run_block(blk);
  } else {
    for (std::int64_t blk = 0; blk < nblocks; ++blk) run_block(blk);
  }

  double sv = 0.0, svv = 0.0, sq = 0.0, sqq = 0.0;
  std::vector<double> sa(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sc(static_cast<std::size_t>(n), 0.0);
  for (const EvalBlock& p : parts) {
    sv += p.sv;
    svv += p.svv;
    sq += p.sq;
    sqq += p.sqq;
    for (int a = 0; a < n; ++a) {
      sa[static_cast<std::size_t>(a)] += p.sa[static_cast<std::size_t>(a)];
      sc[static_cast<std::size_t>(a)] += p.sc[static_cast<std::size_t>(a)];
    }
  }

  BetEvaluation ev;
  ev.count = count;
  const double cnt = static_cast<double>(count);
  ev.growth_mean = sv / cnt;
  ev.risk_mean = sq / cnt;
  auto std_err = [cnt](double s, double ss, double mean) {
    if (cnt < 2.0 || !std::isfinite(mean)) return 0.0;
    const double var = std::max(0.0, (ss - s * mean) / (cnt - 1.0));
    return std::sqrt(var / cnt);
  };
  ev.growth_std_error = std_err(sv, svv, ev.growth_mean);
  ev.risk_std_error = std_err(sq, sqq, ev.risk_mean);
  ev.inv_moment.resize(static_cast<std::size_t>(n));
  ev.risk_inv_moment.resize(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    ev.inv_moment[static_cast<std::size_t>(a)] = sa[static_cast<std::size_t>(a)] / cnt;
    ev.risk_inv_moment[static_cast<std::size_t>(a)] = sc[static_cast<std::size_t>(a)] / cnt;
  }
  return ev;
}

void simulate_paths(const ReturnSampler& sampler, std::span<const double> bet,
                    int steps, std::uint64_t stream_offset,
                    std::span<double> min_wealth_out,
                    std::span<double> final_log_wealth_out, Exec exec) {
  const int n = sampler.dimension();
  if (static_cast<int>(bet.size()) != n)
    throw std::invalid_argument("simulate_paths: dimension mismatch");
  const std::int64_t m = static_cast<std::int64_t>(min_wealth_out.size());

  auto run_path = [&](std::int64_t j) {
    std::vector<double> buf(static_cast<std::size_t>(steps) * n);
    sampler.draw(stream_offset + static_cast<std::uint64_t>(j), steps, buf);
    double v = 0.0;       // log wealth
    double vmin = 0.0;    // includes the start w_1 = 1
    bool ruined = false;
    for (int t = 0; t < steps; ++t) {
      const double* r = buf.data() + static_cast<std::size_t>(t) * n;
      double y = 0.0;
      for (int a = 0; a < n; ++a) y += r[a] * bet[static_cast<std::size_t>(a)];
      if (y <= 0.0) {
        ruined = true;
        break;
      }
      v += std::log(y);
      vmin = std::min(vmin, v);
    }
    if (ruined) {
      min_wealth_out[static_cast<std::size_t>(j)] = 0.0;
      final_log_wealth_out[static_cast<std::size_t>(j)] = -kInf;
    } else {
      min_wealth_out[static_cast<std::size_t>(j)] = std::exp(vmin);
      final_log_wealth_out[static_cast<std::size_t>(j)] = v;
    }
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t j = 0; j < m; ++j) run_path(j);
  } else {
    for (std::int64_t j = 0; j < m; ++j) run_path(j);
  }
}

}  // namespace rck::kernels
