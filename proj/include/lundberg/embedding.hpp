#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "lundberg/adjustment.hpp"
#include "lundberg/distribution.hpp"
#include "lundberg/errors.hpp"
#include "lundberg/excess.hpp"
#include "lundberg/montecarlo.hpp"
#include "lundberg/rng.hpp"

namespace lundberg {

/// Finite-support law to embed. Unlike Distribution it carries no sign or
/// positive-mean requirements: any finite atomic law can be embedded.
struct AtomicDistribution {
  std::vector<Atom> atoms;  // strictly increasing, probabilities sum to 1
  double mean = 0.0;
  double variance = 0.0;

  static AtomicDistribution from_atoms(std::vector<Atom> atoms) {
    detail::require(!atoms.empty(), ErrorCode::invalid_parameter,
                    "atomic law needs at least one atom");
    double psum = 0.0;
    for (const Atom& a : atoms) {
      detail::require(std::isfinite(a.x), ErrorCode::invalid_parameter,
                      "atom value must be finite");
      detail::require(a.p > 0.0, ErrorCode::invalid_parameter,
                      "atom probabilities must be positive");
      psum += a.p;
    }
    detail::require(std::abs(psum - 1.0) <= 1e-12, ErrorCode::invalid_parameter,
                    "atom probabilities must sum to 1 within 1e-12");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.x < b.x; });
    for (std::size_t i = 1; i < atoms.size(); ++i) {
      detail::require(atoms[i].x > atoms[i - 1].x, ErrorCode::invalid_parameter,
                      "atoms must be strictly increasing");
    }
    AtomicDistribution f;
    f.atoms = std::move(atoms);
    double m1 = 0.0, m2 = 0.0;
    for (Atom& a : f.atoms) {
      a.p /= psum;
      m1 += a.p * a.x;
      m2 += a.p * a.x * a.x;
    }
    f.mean = f.atoms.size() == 1 ? f.atoms.front().x : m1;
    f.variance = std::max(0.0, m2 - m1 * m1);
    return f;
  }

  static AtomicDistribution from_distribution(const Distribution& dist) {
    detail::require(dist.is_atomic(), ErrorCode::invalid_parameter,
                    "embedding requires a finite-support law");
    return from_atoms(dist.atoms());
  }
};

/// Result of one embedding run. quadratic_time accumulates
/// (position-left)*(right-position) over the exit steps, whose expectation is
/// E[T] for the SBM chain (Wald: equal to Var(F)). chain_max/chain_min range
/// over all visited chain positions including start and stop.
struct EmbeddingOutcome {
  double stopped_value = 0.0;
  std::size_t stopped_index = 0;
  std::uint64_t n_exits = 0;
  double quadratic_time = 0.0;
  double chain_max = 0.0;
  double chain_min = 0.0;
};

/// Upper barycenter H_F(x) = E[Y | Y >= x].
inline double barycenter(const AtomicDistribution& f, double x) {
  const auto& atoms = f.atoms;
  if (x > atoms.back().x) {
    raise(ErrorCode::empty_tail, "no mass at or above x");
  }
  std::size_t i = atoms.size();
  while (i > 0 && atoms[i - 1].x >= x) --i;
  if (i + 1 == atoms.size()) return atoms.back().x;  // singleton tail, exact
  double px = 0.0, p = 0.0;
  for (std::size_t j = i; j < atoms.size(); ++j) {
    px += atoms[j].p * atoms[j].x;
    p += atoms[j].p;
  }
  return px / p;
}

namespace detail {

/// Conditional mean over the atom range [lo, hi); exact for singletons.
inline double range_mean(const std::vector<Atom>& atoms, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo == 1) return atoms[lo].x;
  double px = 0.0, p = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    px += atoms[j].p * atoms[j].x;
    p += atoms[j].p;
  }
  return px / p;
}

inline AtomicDistribution sub_law(const std::vector<Atom>& atoms, std::size_t lo,
                                  std::size_t hi) {
  std::vector<Atom> part(atoms.begin() + lo, atoms.begin() + hi);
  double p = 0.0;
  for (const Atom& a : part) p += a.p;
  for (Atom& a : part) a.p /= p;
  return AtomicDistribution::from_atoms(std::move(part));
}

inline void touch(EmbeddingOutcome& out, double pos) {
  out.chain_max = std::max(out.chain_max, pos);
  out.chain_min = std::min(out.chain_min, pos);
}

}  // namespace detail

/// Dubins' recursive scheme: first exit from (E[Y|Y<E[Y]], E[Y|Y>=E[Y]])
/// starting at E[Y], then recurse on the selected conditional law. Exit
/// outcomes are sampled exactly: from m in (a,b) the top is hit with
/// probability (m-a)/(b-a).
inline EmbeddingOutcome dubins_embed(const AtomicDistribution& f, RngStream& rng) {
  const auto& atoms = f.atoms;
  std::size_t lo = 0, hi = atoms.size();
  double pos = f.mean;
  EmbeddingOutcome out;
  out.chain_max = out.chain_min = pos;
  while (hi - lo > 1) {
    // First atom index at or above the conditional mean; both parts nonempty.
    std::size_t split = lo;
    while (atoms[split].x < pos) ++split;
    const double a = detail::range_mean(atoms, lo, split);
    const double b = detail::range_mean(atoms, split, hi);
    out.quadratic_time += (pos - a) * (b - pos);
    ++out.n_exits;
    if (rng.uniform() < (pos - a) / (b - a)) {
      lo = split;
      pos = b;
    } else {
      hi = split;
      pos = a;
    }
    detail::touch(out, pos);
  }
  out.stopped_value = atoms[lo].x;
  out.stopped_index = lo;
  return out;
}

/// Azema-Yor rule for atomic laws: atoms are incorporated one at a time in
/// their natural order. Stage j exits (x_j, H_F(x_{j+1})) from H_F(x_j);
/// hitting the bottom stops at the atom, hitting the top moves to the next
/// barycenter. Stops as soon as an atom is reached after visiting the
/// barycenter of the law from that atom upward.
inline EmbeddingOutcome azema_yor_embed(const AtomicDistribution& f,
                                        RngStream& rng) {
  const auto& atoms = f.atoms;
  const std::size_t k = atoms.size();

  // Suffix barycenters h[j] = E[Y | Y >= x_j]; singleton tail kept exact.
  std::vector<double> h(k);
  h[k - 1] = atoms[k - 1].x;
  if (k > 1) {
    double px = atoms[k - 1].p * atoms[k - 1].x;
    double p = atoms[k - 1].p;
    for (std::size_t j = k - 1; j-- > 0;) {
      px += atoms[j].p * atoms[j].x;
      p += atoms[j].p;
      h[j] = px / p;
    }
  }

  EmbeddingOutcome out;
  double pos = h[0];
  out.chain_max = out.chain_min = pos;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double a = atoms[j].x;
    const double b = h[j + 1];
    out.quadratic_time += (pos - a) * (b - pos);
    ++out.n_exits;
    if (rng.uniform() < (pos - a) / (b - a)) {
      pos = b;
      detail::touch(out, pos);
    } else {
      out.stopped_value = atoms[j].x;
      out.stopped_index = j;
      detail::touch(out, atoms[j].x);
      return out;
    }
  }
  out.stopped_value = atoms[k - 1].x;
  out.stopped_index = k - 1;
  return out;
}

/// Mirror image minimizing the minimum: Azema-Yor applied to -F in -W.
inline EmbeddingOutcome azema_yor_minus_embed(const AtomicDistribution& f,
                                              RngStream& rng) {
  const std::size_t k = f.atoms.size();
  std::vector<Atom> reflected(k);
  for (std::size_t i = 0; i < k; ++i) {
    reflected[i] = {-f.atoms[k - 1 - i].x, f.atoms[k - 1 - i].p};
  }
  const EmbeddingOutcome m =
      azema_yor_embed(AtomicDistribution::from_atoms(std::move(reflected)), rng);
  EmbeddingOutcome out;
  out.stopped_value = -m.stopped_value;
  out.stopped_index = k - 1 - m.stopped_index;
  out.n_exits = m.n_exits;
  out.quadratic_time = m.quadratic_time;
  out.chain_max = -m.chain_min;
  out.chain_min = -m.chain_max;
  return out;
}

/// Dubins / Azema-Yor hybrid: a first Dubins split, then AY on the upper
/// conditional law and mirrored AY on the lower one.
inline EmbeddingOutcome day_embed(const AtomicDistribution& f, RngStream& rng) {
  const auto& atoms = f.atoms;
  const std::size_t k = atoms.size();
  if (k == 1) {
    EmbeddingOutcome out;
    out.stopped_value = atoms[0].x;
    out.chain_max = out.chain_min = atoms[0].x;
    return out;
  }

  const double m = f.mean;
  std::size_t split = 0;
  while (atoms[split].x < m) ++split;
  const double a = detail::range_mean(atoms, 0, split);
  const double b = detail::range_mean(atoms, split, k);

  EmbeddingOutcome out;
  out.chain_max = out.chain_min = m;
  out.quadratic_time = (m - a) * (b - m);
  out.n_exits = 1;

  if (rng.uniform() < (m - a) / (b - a)) {
    detail::touch(out, b);
    const EmbeddingOutcome up =
        azema_yor_embed(detail::sub_law(atoms, split, k), rng);
    out.stopped_value = up.stopped_value;
    out.stopped_index = split + up.stopped_index;
    out.n_exits += up.n_exits;
    out.quadratic_time += up.quadratic_time;
    detail::touch(out, up.chain_max);
    detail::touch(out, up.chain_min);
  } else {
    detail::touch(out, a);
    const EmbeddingOutcome down =
        azema_yor_minus_embed(detail::sub_law(atoms, 0, split), rng);
    out.stopped_value = down.stopped_value;
    out.stopped_index = down.stopped_index;
    out.n_exits += down.n_exits;
    out.quadratic_time += down.quadratic_time;
    detail::touch(out, down.chain_max);
    detail::touch(out, down.chain_min);
  }
  return out;
}

struct CoupledDrawdownReport {
  std::uint64_t n_paths = 0;
  double alpha = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  std::uint64_t drawdown_flag_violations = 0;   // BM chain drawdown < d at stop
  std::uint64_t upper_order_violations = 0;     // chain max reached M_d + d+
  std::uint64_t lower_order_violations = 0;     // chain min reached S_tau - d-
  MonteCarloEstimate expected_max;              // E[M_d^RW] over these paths
  double bm_emax_reference = 0.0;               // (exp(alpha d)-1)/alpha
  double mean_tau = 0.0;
  double mean_exits_per_step = 0.0;
};

/// Embeds the walk's exponential martingale exp(-alpha S_n) into
/// exp(-alpha B(t)) step by step: each increment's image exp(-alpha X) is
/// embedded by the DAY chain in the geometric scale, where martingale exit
/// probabilities coincide with the drifted-BM scale-function probabilities
/// (exp(-alpha x)-exp(-alpha a))/(exp(-alpha b)-exp(-alpha a)). Because the
/// adjustment coefficient makes E[exp(-alpha X)] = 1, every step's relative
/// chain is the same law started at its mean, independent of the current
/// level. Tracks the BM exit-chain extremes and checks the path-ordering
/// claims per path.
inline CoupledDrawdownReport coupled_drawdown_experiment(
    const Distribution& dist, double d, std::uint64_t n_paths,
    std::uint64_t seed = kDefaultSeed, unsigned workers = 0) {
  detail::require(dist.is_atomic(), ErrorCode::invalid_parameter,
                  "coupled experiment requires a finite-support law");
  detail::require(d > 0.0, ErrorCode::invalid_parameter, "d must be positive");

  const double alpha = adjustment_coefficient(dist).alpha;
  const ExcessSide plus = d_plus(dist, alpha);
  const ExcessSide minus = d_minus(dist, alpha);

  // Geometric-scale step law: atoms exp(-alpha x_i), ascending = x descending.
  const auto& xatoms = dist.atoms();
  const std::size_t k = xatoms.size();
  std::vector<Atom> gatoms(k);
  std::vector<double> increment_of(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Atom& src = xatoms[k - 1 - i];
    gatoms[i] = {std::exp(-alpha * src.x), src.p};
    increment_of[i] = src.x;
  }
  // Mean is E[exp(-alpha X)] = 1 up to the solver residual.
  AtomicDistribution g = AtomicDistribution::from_atoms(std::move(gatoms));

  struct Partial {
    std::uint64_t flag_a = 0, flag_b_up = 0, flag_b_low = 0;
    double sum_m = 0.0, sumsq_m = 0.0;
    double sum_tau = 0.0, sum_exits = 0.0, sum_steps = 0.0;
    std::uint64_t n = 0;
  };
  const std::uint64_t n_chunks = (n_paths + kChunkEpisodes - 1) / kChunkEpisodes;
  std::vector<Partial> partials(n_chunks);

  constexpr double kTol = 1e-9;
  auto run_chunk = [&](std::uint64_t c) {
    RngStream rng(seed, c);
    const std::uint64_t begin = c * kChunkEpisodes;
    const std::uint64_t end = std::min(n_paths, begin + kChunkEpisodes);
    Partial pt;
    for (std::uint64_t i = begin; i < end; ++i) {
      double s = 0.0, rm = 0.0, bm_max = 0.0, bm_min = 0.0;
      std::uint64_t steps = 0, exits = 0;
      while (true) {
        if (++steps > kStepLimit) {
          raise(ErrorCode::step_limit_exceeded, "coupled experiment step limit");
        }
        const EmbeddingOutcome step = day_embed(g, rng);
        // Relative geometric positions map to BM levels s - log(v)/alpha.
        bm_max = std::max(bm_max, s - std::log(step.chain_min) / alpha);
        bm_min = std::min(bm_min, s - std::log(step.chain_max) / alpha);
        exits += step.n_exits;
        s += increment_of[step.stopped_index];
        rm = std::max(rm, s);
        if (rm - s >= d) break;
      }
      if (bm_max - s < d - kTol) ++pt.flag_a;
      if (bm_max > rm + plus.value - kTol) ++pt.flag_b_up;
      if (bm_min < s - minus.value + kTol) ++pt.flag_b_low;
      pt.sum_m += rm;
      pt.sumsq_m += rm * rm;
      pt.sum_tau += static_cast<double>(steps);
      pt.sum_exits += static_cast<double>(exits);
      pt.sum_steps += static_cast<double>(steps);
      ++pt.n;
    }
    partials[c] = pt;
  };

  unsigned w = workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                            : workers;
  w = static_cast<unsigned>(
      std::min<std::uint64_t>(w, std::max<std::uint64_t>(n_chunks, 1)));
  if (w <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < n_chunks; c += w) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  CoupledDrawdownReport rep;
  rep.n_paths = n_paths;
  rep.alpha = alpha;
  rep.d_plus = plus.value;
  rep.d_minus = minus.value;
  double sum_m = 0.0, sumsq_m = 0.0, sum_tau = 0.0, sum_exits = 0.0,
         sum_steps = 0.0;
  for (const Partial& pt : partials) {
    rep.drawdown_flag_violations += pt.flag_a;
    rep.upper_order_violations += pt.flag_b_up;
    rep.lower_order_violations += pt.flag_b_low;
    sum_m += pt.sum_m;
    sumsq_m += pt.sumsq_m;
    sum_tau += pt.sum_tau;
    sum_exits += pt.sum_exits;
    sum_steps += pt.sum_steps;
  }
  rep.expected_max.n = n_paths;
  rep.expected_max.seed = seed;
  rep.expected_max.mean = sum_m / static_cast<double>(n_paths);
  const double var =
      n_paths > 1
          ? std::max(0.0, (sumsq_m - static_cast<double>(n_paths) *
                                         rep.expected_max.mean *
                                         rep.expected_max.mean) /
                              static_cast<double>(n_paths - 1))
          : 0.0;
  rep.expected_max.std_error = std::sqrt(var / static_cast<double>(n_paths));
  rep.bm_emax_reference = std::expm1(alpha * d) / alpha;
  rep.mean_tau = sum_tau / static_cast<double>(n_paths);
  rep.mean_exits_per_step = sum_steps > 0.0 ? sum_exits / sum_steps : 0.0;
  return rep;
}

}  // namespace lundberg
