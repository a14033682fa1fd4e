#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lundberg/adjustment.hpp"
#include "lundberg/distribution.hpp"
#include "lundberg/errors.hpp"
#include "lundberg/math.hpp"

namespace lundberg {

struct ExcessSide {
  double value = 0.0;                 // +inf when the unrestricted sup diverges
  std::optional<double> argmax;       // none when divergent
  bool finite = true;
  bool at_boundary = false;           // sup approached at a domain endpoint
};

struct ExcessConstants {
  double d_plus = 0.0;
  double d_minus = 0.0;
  double d_zero = 0.0;
  std::optional<double> argmax_plus;
  std::optional<double> argmax_minus;
  std::optional<double> cap;
  bool finite_plus = true;
  bool finite_minus = true;
};

namespace detail {

// Right-side maximand -log E[exp(-alpha(X-x)) | X >= x], to be divided by alpha.
inline double plus_maximand(const Distribution& dist, double alpha, double x) {
  return -std::log(dist.cond_upper_exp_moment(alpha, x));
}

// Left-side maximand log E[exp(alpha(x-X)) | X < x].
inline double minus_maximand(const Distribution& dist, double alpha, double x) {
  return std::log(dist.cond_lower_exp_moment(alpha, x));
}

/// Exact supremum for atomic laws, right side. On each constancy interval
/// (a_{j-1}, a_j] of the conditioning set the maximand is linear decreasing in
/// x, so the sup over (0, hi) is the max of the left limits: the tail strictly
/// above each candidate abscissa e in {0} union {atoms in (0, hi)}.
inline ExcessSide atomic_plus(const Distribution& dist, double alpha, double hi) {
  const auto& atoms = dist.atoms();
  std::vector<double> candidates{0.0};
  for (const Atom& a : atoms) {
    if (a.x > 0.0 && a.x < hi) candidates.push_back(a.x);
  }
  ExcessSide side;
  double best = -num::kInf;
  double best_e = 0.0;
  for (double e : candidates) {
    double num_acc = 0.0, den = 0.0;
    for (const Atom& a : atoms) {
      if (a.x > e) {
        num_acc += a.p * std::exp(-alpha * (a.x - e));
        den += a.p;
      }
    }
    if (den <= 0.0) continue;
    const double v = -std::log(num_acc / den);
    if (v > best) {
      best = v;
      best_e = e;
    }
  }
  side.value = best / alpha;
  side.argmax = best_e;
  side.at_boundary = best_e == 0.0;
  return side;
}

/// Exact supremum for atomic laws, left side. The maximand is increasing on
/// each constancy interval and the set {X < x} is strict, so the sup is
/// attained at the atoms themselves (and approached at 0-).
inline ExcessSide atomic_minus(const Distribution& dist, double alpha, double lo) {
  const auto& atoms = dist.atoms();
  std::vector<double> candidates{0.0};
  for (const Atom& a : atoms) {
    if (a.x < 0.0 && a.x > lo) candidates.push_back(a.x);
  }
  ExcessSide side;
  double best = -num::kInf;
  double best_e = 0.0;
  for (double e : candidates) {
    double num_acc = 0.0, den = 0.0;
    for (const Atom& a : atoms) {
      if (a.x < e) {
        num_acc += a.p * std::exp(alpha * (e - a.x));
        den += a.p;
      }
    }
    if (den <= 0.0) continue;
    const double v = std::log(num_acc / den);
    if (v > best) {
      best = v;
      best_e = e;
    }
  }
  side.value = best / alpha;
  side.argmax = best_e;
  side.at_boundary = best_e == 0.0;
  return side;
}

inline bool is_ifr_family(Family f) {
  return f == Family::gaussian || f == Family::shifted_exponential ||
         f == Family::double_exponential;
}

}  // namespace detail

/// Grid-then-refine maximization of the right-side excess over (0, hi), the
/// generic route. 256-point grid (log-spaced when the support is unbounded up
/// to the cap), golden-section refinement to abscissa tolerance 1e-8.
inline ExcessSide d_plus_by_search(const Distribution& dist, double alpha,
                                   std::optional<double> cap) {
  double hi = dist.essential_sup();
  if (cap) hi = std::min(hi, *cap);
  const bool log_spaced = !std::isfinite(dist.essential_sup());
  if (!std::isfinite(hi)) {
    // No cap on an unbounded support: truncate where the tail mass is gone.
    hi = std::abs(dist.mean()) +
         (std::isfinite(dist.variance()) ? 24.0 * std::sqrt(dist.variance())
                                         : 24.0 * std::abs(dist.mean()));
  }
  auto f = [&](double x) { return detail::plus_maximand(dist, alpha, x); };
  const double lo = log_spaced ? hi * 1e-9 : hi * 1e-12;
  auto [x, v] = num::grid_then_golden_max(f, lo, hi, 256, log_spaced);
  const double at_zero = f(0.0);
  ExcessSide side;
  if (at_zero >= v) {
    side.value = at_zero / alpha;
    side.argmax = 0.0;
    side.at_boundary = true;
  } else {
    side.value = v / alpha;
    side.argmax = x;
    side.at_boundary = x >= hi * (1.0 - 1e-6);
  }
  return side;
}

inline ExcessSide d_minus_by_search(const Distribution& dist, double alpha,
                                    std::optional<double> cap) {
  double lo = dist.essential_inf();
  if (cap) lo = std::max(lo, -*cap);
  if (!std::isfinite(lo)) {
    lo = -(std::abs(dist.mean()) +
           (std::isfinite(dist.variance()) ? 24.0 * std::sqrt(dist.variance())
                                           : 24.0 * std::abs(dist.mean())));
  }
  auto f = [&](double x) { return detail::minus_maximand(dist, alpha, x); };
  // Keep strictly inside the domain: mass below x must be positive.
  const double inner = lo * (1.0 - 1e-9);
  auto [x, v] = num::grid_then_golden_max(f, inner, -std::abs(lo) * 1e-12, 256, false);
  const double at_zero = f(0.0);
  ExcessSide side;
  if (at_zero >= v) {
    side.value = at_zero / alpha;
    side.argmax = 0.0;
    side.at_boundary = true;
  } else {
    side.value = v / alpha;
    side.argmax = x;
    side.at_boundary = x <= inner * (1.0 - 1e-6);
  }
  return side;
}

/// d+ of the increment law: (1/alpha) sup over x in (0, min(es_F, cap)) of
/// -log E[exp(-alpha(X-x)) | X >= x]. cap = nullopt is the unrestricted
/// version; a finite cap is the refinement that stays finite for power tails.
inline ExcessSide d_plus(const Distribution& dist, double alpha,
                         std::optional<double> cap = std::nullopt) {
  detail::require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::invalid_parameter,
                  "alpha must be positive");
  if (cap) {
    detail::require(*cap > 0.0, ErrorCode::invalid_parameter, "cap must be positive");
  }
  if (dist.is_atomic()) {
    return detail::atomic_plus(dist, alpha,
                               cap ? std::min(*cap, dist.essential_sup())
                                   : dist.essential_sup());
  }
  if (dist.heavy_right_excess() && !cap) {
    ExcessSide side;
    side.value = num::kInf;
    side.finite = false;
    side.at_boundary = true;
    return side;
  }
  if (detail::is_ifr_family(dist.family())) {
    // Residual laws are stochastically decreasing in x, so the sup sits at 0+.
    ExcessSide side;
    side.value = detail::plus_maximand(dist, alpha, 0.0) / alpha;
    side.argmax = 0.0;
    side.at_boundary = true;
    return side;
  }
  return d_plus_by_search(dist, alpha, cap);
}

/// Mirror: (1/alpha) sup over x in (max(ei_F, -cap), 0) of
/// log E[exp(alpha(x-X)) | X < x].
inline ExcessSide d_minus(const Distribution& dist, double alpha,
                          std::optional<double> cap = std::nullopt) {
  detail::require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::invalid_parameter,
                  "alpha must be positive");
  if (cap) {
    detail::require(*cap > 0.0, ErrorCode::invalid_parameter, "cap must be positive");
  }
  if (dist.is_atomic()) {
    return detail::atomic_minus(dist, alpha,
                                cap ? std::max(-*cap, dist.essential_inf())
                                    : dist.essential_inf());
  }
  switch (dist.family()) {
    case Family::gaussian:
    case Family::shifted_exponential:
    case Family::double_exponential: {
      ExcessSide side;
      side.value = detail::minus_maximand(dist, alpha, 0.0) / alpha;
      side.argmax = 0.0;
      side.at_boundary = true;
      return side;
    }
    case Family::lomax_mix: {
      // Memoryless left tail: the maximand is constant in x.
      ExcessSide side;
      side.value = detail::minus_maximand(dist, alpha, 0.0) / alpha;
      side.argmax = 0.0;
      side.at_boundary = true;
      return side;
    }
    default:
      return d_minus_by_search(dist, alpha, cap);
  }
}

/// Both sides bundled; per-side divergence propagates as finite=false.
inline ExcessConstants excess_constants(const Distribution& dist, double alpha,
                                        std::optional<double> cap = std::nullopt) {
  const ExcessSide plus = d_plus(dist, alpha, cap);
  const ExcessSide minus = d_minus(dist, alpha, cap);
  ExcessConstants c;
  c.d_plus = plus.value;
  c.d_minus = minus.value;
  c.d_zero = plus.value + minus.value;
  c.argmax_plus = plus.argmax;
  c.argmax_minus = minus.argmax;
  c.cap = cap;
  c.finite_plus = plus.finite;
  c.finite_minus = minus.finite;
  return c;
}

}  // namespace lundberg
