#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "lundberg/adjustment.hpp"
#include "lundberg/distribution.hpp"
#include "lundberg/errors.hpp"
#include "lundberg/excess.hpp"

namespace lundberg {

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_finite = true;
};

struct TailPair {
  double lower = 0.0;
  double upper = 1.0;
};

/// (exp(alpha d) - 1)/alpha <= E[M_d] <= (exp(alpha (d+d0)) - 1)/alpha.
inline BoundPair expected_max_bounds(double alpha, double d, double d_zero) {
  detail::require(alpha > 0.0 && d > 0.0 && d_zero >= 0.0,
                  ErrorCode::invalid_parameter,
                  "expected_max_bounds requires alpha > 0, d > 0, d_zero >= 0");
  BoundPair b;
  b.lower = std::expm1(alpha * d) / alpha;
  b.upper = std::isfinite(d_zero) ? std::expm1(alpha * (d + d_zero)) / alpha
                                  : num::kInf;
  b.upper_finite = std::isfinite(b.upper);
  return b;
}

/// exp(-alpha(x+d-)) <= P(-min > x) <= exp(-alpha x), both clamped to [0,1].
inline TailPair min_tail_bounds(double alpha, double x, double d_minus) {
  detail::require(alpha > 0.0 && x >= 0.0 && d_minus >= 0.0,
                  ErrorCode::invalid_parameter,
                  "min_tail_bounds requires alpha > 0, x >= 0, d_minus >= 0");
  TailPair t;
  t.upper = std::min(1.0, std::exp(-alpha * x));
  t.lower = std::min(1.0, std::exp(-alpha * (x + d_minus)));
  return t;
}

/// E[M_d] for Brownian motion with drift mu and diffusion sigma:
/// (sigma^2 / 2 mu) (exp(2 mu d / sigma^2) - 1).
inline double bm_expected_max(double mu, double sigma, double d) {
  detail::require(mu > 0.0 && sigma > 0.0 && d > 0.0, ErrorCode::invalid_parameter,
                  "bm_expected_max requires positive arguments");
  const double rate = 2.0 * mu / (sigma * sigma);
  return std::expm1(rate * d) / rate;
}

/// P(-min > x) = 1 ^ exp(-(2 mu / sigma^2) x) for positive-drift BM.
inline double bm_min_tail(double mu, double sigma, double x) {
  detail::require(mu > 0.0 && sigma > 0.0 && x >= 0.0, ErrorCode::invalid_parameter,
                  "bm_min_tail requires mu, sigma > 0 and x >= 0");
  return std::min(1.0, std::exp(-(2.0 * mu / (sigma * sigma)) * x));
}

/// Exact E[M_d] for the +/-1 walk with up-probability p: the pre-drawdown
/// record is -1 plus a geometric count of gambler's-ruin successes, so
/// E[M_d] = p/(2p-1) (exp(alpha ceil(d)) - 1) with alpha = log(p/(1-p)).
/// Non-integer d uses the ceiling.
inline double dichotomous_expected_max(double p, double d) {
  detail::require(p > 0.5 && p < 1.0, ErrorCode::invalid_parameter,
                  "dichotomous_expected_max requires p in (1/2, 1)");
  detail::require(d > 0.0, ErrorCode::invalid_parameter, "d must be positive");
  const double alpha = std::log(p / (1.0 - p));
  return p / (2.0 * p - 1.0) * std::expm1(alpha * std::ceil(d));
}

struct BmReference {
  double mu = 0.0;
  double sigma = 0.0;
  double emax = 0.0;
  struct TailRow {
    double x;
    double value;
  };
  std::vector<TailRow> tail;
};

enum class CapPolicy { cap_at_d, unrestricted };

struct BoundsReport {
  double alpha = 0.0;
  double d = 0.0;
  ExcessConstants excess;  // per the active cap policy
  std::optional<ExcessConstants> excess_unrestricted;
  double emax_lower = 0.0;
  double emax_upper = 0.0;
  bool emax_upper_finite = true;
  struct MinTailRow {
    double x;
    double lower;
    double upper;
  };
  std::vector<MinTailRow> min_tail;
  BmReference bm_reference;
};

/// Everything in one pass: alpha, excess constants (capped at d by default),
/// the expectation and tail bounds, and the coupled BM reference whose
/// parameters keep the increment mean and satisfy 2 mu / sigma^2 = alpha.
inline BoundsReport bounds_report(const Distribution& dist, double d,
                                  std::span<const double> xs,
                                  CapPolicy cap_policy = CapPolicy::cap_at_d) {
  detail::require(d > 0.0, ErrorCode::invalid_parameter, "d must be positive");
  BoundsReport r;
  r.d = d;
  r.alpha = adjustment_coefficient(dist).alpha;

  const std::optional<double> cap =
      cap_policy == CapPolicy::cap_at_d ? std::optional<double>(d) : std::nullopt;
  r.excess = excess_constants(dist, r.alpha, cap);
  if (cap_policy == CapPolicy::cap_at_d) {
    r.excess_unrestricted = excess_constants(dist, r.alpha, std::nullopt);
  }

  const double d_zero =
      r.excess.finite_plus && r.excess.finite_minus ? r.excess.d_zero : num::kInf;
  const BoundPair em = expected_max_bounds(r.alpha, d, d_zero);
  r.emax_lower = em.lower;
  r.emax_upper = em.upper;
  r.emax_upper_finite = em.upper_finite;

  for (double x : xs) {
    const TailPair t = min_tail_bounds(r.alpha, x, r.excess.d_minus);
    r.min_tail.push_back({x, t.lower, t.upper});
  }

  r.bm_reference.mu = dist.mean();
  r.bm_reference.sigma = std::sqrt(2.0 * dist.mean() / r.alpha);
  r.bm_reference.emax = bm_expected_max(r.bm_reference.mu, r.bm_reference.sigma, d);
  for (double x : xs) {
    r.bm_reference.tail.push_back(
        {x, bm_min_tail(r.bm_reference.mu, r.bm_reference.sigma, x)});
  }
  return r;
}

}  // namespace lundberg
