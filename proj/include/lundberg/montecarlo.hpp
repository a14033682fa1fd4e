#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "lundberg/adjustment.hpp"
#include "lundberg/distribution.hpp"
#include "lundberg/errors.hpp"
#include "lundberg/rng.hpp"

namespace lundberg {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;
inline constexpr std::uint64_t kChunkEpisodes = 4096;
inline constexpr std::uint64_t kStepLimit = 1'000'000'000;

/// One drawdown episode: record height M_d, stopping step tau, realized
/// drawdown at the stop (>= d since increments jump).
struct EpisodeSample {
  double m_d = 0.0;
  std::uint64_t tau = 0;
  double overshoot = 0.0;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std dev / sqrt(n)
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double censored_fraction = 0.0;  // minimum estimation only
};

namespace detail {

struct ScalarStats {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t n = 0;
};

/// Runs `count` draws split into fixed-size chunks; chunk k draws from
/// RngStream(seed, k). Partials are reduced in chunk order, so the result is
/// bit-identical for any worker count.
template <class PerDraw>
inline std::vector<ScalarStats> chunked_scalar_run(std::uint64_t count,
                                                   std::uint64_t seed,
                                                   unsigned workers,
                                                   PerDraw per_draw) {
  const std::uint64_t n_chunks = (count + kChunkEpisodes - 1) / kChunkEpisodes;
  std::vector<ScalarStats> partials(n_chunks);
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n_chunks, 1)));

  auto run_chunk = [&](std::uint64_t k) {
    RngStream rng(seed, k);
    const std::uint64_t begin = k * kChunkEpisodes;
    const std::uint64_t end = std::min(count, begin + kChunkEpisodes);
    ScalarStats s;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double v = per_draw(rng);
      s.sum += v;
      s.sumsq += v * v;
      ++s.n;
    }
    partials[k] = s;
  };

  if (workers <= 1) {
    for (std::uint64_t k = 0; k < n_chunks; ++k) run_chunk(k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t k = w; k < n_chunks; k += workers) run_chunk(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  return partials;
}

inline MonteCarloEstimate reduce_scalar(const std::vector<ScalarStats>& partials,
                                        std::uint64_t seed) {
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t n = 0;
  for (const ScalarStats& s : partials) {  // fixed chunk order
    sum += s.sum;
    sumsq += s.sumsq;
    n += s.n;
  }
  MonteCarloEstimate e;
  e.n = n;
  e.seed = seed;
  e.mean = sum / static_cast<double>(n);
  const double var =
      n > 1 ? std::max(0.0, (sumsq - static_cast<double>(n) * e.mean * e.mean) /
                                static_cast<double>(n - 1))
            : 0.0;
  e.std_error = std::sqrt(var / static_cast<double>(n));
  return e;
}

}  // namespace detail

/// Steps S_n = S_{n-1} + X_n tracking the running max; stops the first time
/// running_max - S_n >= d. Terminates a.s. because P(X < 0) > 0.
inline EpisodeSample run_episode(const Distribution& dist, double d,
                                 RngStream& rng,
                                 std::uint64_t max_steps = kStepLimit) {
  detail::require(d > 0.0, ErrorCode::invalid_parameter, "d must be positive");
  double s = 0.0;
  double running_max = 0.0;
  for (std::uint64_t n = 1; n <= max_steps; ++n) {
    s += dist.sample(rng);
    running_max = std::max(running_max, s);
    const double gap = running_max - s;
    if (gap >= d) {
      return {running_max, n, gap};
    }
  }
  raise(ErrorCode::step_limit_exceeded,
        "no drawdown of size " + std::to_string(d) + " within step limit");
}

/// Mean of n independent episode record heights M_d.
inline MonteCarloEstimate estimate_expected_max(const Distribution& dist, double d,
                                                std::uint64_t n,
                                                std::uint64_t seed = kDefaultSeed,
                                                unsigned workers = 0) {
  detail::require(n >= 100, ErrorCode::invalid_parameter, "n must be >= 100");
  auto partials = detail::chunked_scalar_run(
      n, seed, workers,
      [&](RngStream& rng) { return run_episode(dist, d, rng).m_d; });
  return detail::reduce_scalar(partials, seed);
}

/// Survival estimates P(-min > x) for each queried x. A path is simulated
/// until its ascent from the running minimum reaches max(xs) + log(1/eps)/alpha;
/// by Lundberg's bound any later new minimum below a queried level then has
/// probability at most eps. Paths whose minimum never crossed -x are counted
/// as "min not below x" and reported in censored_fraction (bias <= eps each).
inline std::vector<MonteCarloEstimate> estimate_min_tail(
    const Distribution& dist, std::vector<double> xs, std::uint64_t n,
    std::uint64_t seed = kDefaultSeed, double eps = 1e-6, unsigned workers = 0,
    std::uint64_t max_steps = kStepLimit) {
  detail::require(!xs.empty(), ErrorCode::invalid_parameter, "xs must be nonempty");
  detail::require(eps > 0.0 && eps <= 1e-3, ErrorCode::invalid_parameter,
                  "eps must lie in (0, 1e-3]");
  std::sort(xs.begin(), xs.end());
  detail::require(xs.front() >= 0.0, ErrorCode::invalid_parameter,
                  "queried levels must be nonnegative");

  const double alpha = adjustment_coefficient(dist).alpha;
  const double margin = xs.back() + std::log(1.0 / eps) / alpha;

  const std::uint64_t n_chunks = (n + kChunkEpisodes - 1) / kChunkEpisodes;
  struct CountStats {
    std::vector<std::uint64_t> below;
  };
  std::vector<CountStats> partials(n_chunks);

  unsigned w = workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                            : workers;
  w = static_cast<unsigned>(
      std::min<std::uint64_t>(w, std::max<std::uint64_t>(n_chunks, 1)));

  auto run_chunk = [&](std::uint64_t k) {
    RngStream rng(seed, k);
    const std::uint64_t begin = k * kChunkEpisodes;
    const std::uint64_t end = std::min(n, begin + kChunkEpisodes);
    CountStats cs;
    cs.below.assign(xs.size(), 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      double s = 0.0, running_min = 0.0;
      std::uint64_t steps = 0;
      while (s - running_min < margin) {
        if (++steps > max_steps) {
          raise(ErrorCode::step_limit_exceeded, "minimum estimation step limit");
        }
        s += dist.sample(rng);
        running_min = std::min(running_min, s);
      }
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (-running_min > xs[j]) ++cs.below[j];
      }
    }
    partials[k] = std::move(cs);
  };

  if (w <= 1) {
    for (std::uint64_t k = 0; k < n_chunks; ++k) run_chunk(k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t k = t; k < n_chunks; k += w) run_chunk(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<MonteCarloEstimate> out;
  out.reserve(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    std::uint64_t below = 0;
    for (const CountStats& cs : partials) below += cs.below[j];
    MonteCarloEstimate e;
    e.n = n;
    e.seed = seed;
    e.mean = static_cast<double>(below) / static_cast<double>(n);
    const double var = n > 1 ? e.mean * (1.0 - e.mean) * static_cast<double>(n) /
                                   static_cast<double>(n - 1)
                             : 0.0;
    e.std_error = std::sqrt(var / static_cast<double>(n));
    e.censored_fraction = 1.0 - e.mean;
    out.push_back(e);
  }
  return out;
}

/// Estimates E[exp(-alpha S_n)] after a fixed number of steps (mean-1
/// martingale identity).
inline MonteCarloEstimate martingale_check(const Distribution& dist, double alpha,
                                           std::uint64_t n_steps,
                                           std::uint64_t n_paths,
                                           std::uint64_t seed = kDefaultSeed,
                                           unsigned workers = 0) {
  detail::require(alpha > 0.0, ErrorCode::invalid_parameter, "alpha must be positive");
  const double exponent_bound =
      alpha * static_cast<double>(n_steps) * dist.increment_scale_hint();
  if (exponent_bound > 700.0) {
    raise(ErrorCode::overflow_guard,
          "exp(-alpha S_n) can overflow: alpha * n_steps * |X| ~ " +
              std::to_string(exponent_bound));
  }
  if (n_steps == 0) {
    MonteCarloEstimate e;
    e.mean = 1.0;
    e.n = n_paths;
    e.seed = seed;
    return e;
  }
  auto partials = detail::chunked_scalar_run(
      n_paths, seed, workers, [&](RngStream& rng) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < n_steps; ++i) s += dist.sample(rng);
        return std::exp(-alpha * s);
      });
  return detail::reduce_scalar(partials, seed);
}

/// Estimates E[exp(-alpha S_tau)] at the drawdown stopping time; optional
/// stopping for the bounded-below stopped martingale makes this 1 as well.
inline MonteCarloEstimate stopped_martingale_check(const Distribution& dist,
                                                   double d,
                                                   std::uint64_t n_paths,
                                                   std::uint64_t seed = kDefaultSeed,
                                                   unsigned workers = 0) {
  const double alpha = adjustment_coefficient(dist).alpha;
  auto partials = detail::chunked_scalar_run(
      n_paths, seed, workers, [&](RngStream& rng) {
        const EpisodeSample ep = run_episode(dist, d, rng);
        return std::exp(-alpha * (ep.m_d - ep.overshoot));
      });
  return detail::reduce_scalar(partials, seed);
}

}  // namespace lundberg
