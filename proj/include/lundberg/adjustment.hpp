#pragma once

#include <cmath>
#include <string>

#include "lundberg/distribution.hpp"
#include "lundberg/errors.hpp"

namespace lundberg {

enum class SolveMethod { closed_form, bisection_newton };

inline const char* solve_method_name(SolveMethod m) {
  return m == SolveMethod::closed_form ? "closed_form" : "bisection_newton";
}

struct AdjustmentResult {
  double alpha = 0.0;
  double riskiness = 0.0;      // 1/alpha
  double gaussian_rate = 0.0;  // 2 E[X] / Var[X]
  struct Solver {
    SolveMethod method = SolveMethod::closed_form;
    int iterations = 0;
    double residual = 0.0;
    bool tolerance_met = true;
  } solver;
};

/// 2*mean/variance, the rate a Gaussian walk with the same first two moments
/// would have.
inline double gaussian_rate(const Distribution& dist) {
  detail::require(std::isfinite(dist.variance()) && dist.variance() > 0.0,
                  ErrorCode::invalid_parameter,
                  "gaussian_rate requires finite positive variance");
  return 2.0 * dist.mean() / dist.variance();
}

namespace detail {

inline double solver_start_scale(const Distribution& dist) {
  if (std::isfinite(dist.variance()) && dist.variance() > 0.0) {
    return 2.0 * (2.0 * dist.mean() / dist.variance());
  }
  return 1.0;  // infinite-variance laws: expand from unit scale
}

/// Bracketed root of g(t) = E[exp(-tX)] - 1 on (0, divergence rate):
/// geometric bracket expansion, bisection to 1e-6, Newton polish to tol.
inline AdjustmentResult solve_numeric(const Distribution& dist, double tol) {
  const double rate = dist.divergence_rate();
  auto g = [&](double t) { return dist.neg_exp_moment(t) - 1.0; };

  int iterations = 0;
  double hi = solver_start_scale(dist);
  if (std::isfinite(rate)) hi = std::min(hi, 0.5 * rate);
  double lo = 0.0;  // g(0) = 0 and g < 0 just right of 0
  while (true) {
    ++iterations;
    const double ghi = g(hi);
    if (ghi > 0.0) break;
    if (iterations > 200) raise(ErrorCode::no_root, "bracket expansion exhausted");
    lo = hi;
    if (std::isfinite(rate)) {
      const double next = 0.5 * (hi + rate);
      if (rate - next <= rate * 1e-14) {
        raise(ErrorCode::no_root,
              "E[exp(-tX)] never returns to 1 below the divergence rate");
      }
      hi = std::min(2.0 * hi, next);
    } else {
      if (hi > 1e100) raise(ErrorCode::no_root, "no sign change found");
      hi *= 2.0;
    }
  }

  while (hi - lo > 1e-6 * std::max(1.0, hi)) {
    ++iterations;
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  double t = 0.5 * (lo + hi);
  double gt = g(t);
  for (int k = 0; k < 100 && std::abs(gt) > tol; ++k) {
    ++iterations;
    const double slope = dist.neg_exp_moment_derivative(t);
    double next = t - gt / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // fall back to bisection
    const double gn = g(next);
    if (gn > 0.0) {
      hi = next;
    } else {
      lo = next;
    }
    t = next;
    gt = gn;
  }

  AdjustmentResult r;
  r.alpha = t;
  r.riskiness = 1.0 / t;
  r.gaussian_rate = std::isfinite(dist.variance()) && dist.variance() > 0.0
                        ? 2.0 * dist.mean() / dist.variance()
                        : num::kNaN;
  r.solver.method = SolveMethod::bisection_newton;
  r.solver.iterations = iterations;
  r.solver.residual = std::abs(gt);
  r.solver.tolerance_met = std::abs(gt) <= tol;
  if (!r.solver.tolerance_met && std::abs(gt) > 1e-8) {
    raise(ErrorCode::tolerance_not_met,
          "solver residual " + std::to_string(std::abs(gt)));
  }
  return r;
}

/// Shifted exponential: invert (1/alpha) log(1 + alpha/theta) = delta.
inline double shifted_exponential_alpha(double theta, double delta, double tol,
                                        int& iterations) {
  auto h = [&](double a) { return std::log1p(a / theta) - a * delta; };
  // h(0)=0, h'(0)=1/theta-delta>0, concave: unique positive root.
  double hi = 2.0 * (1.0 / theta - delta) / (delta * delta);  // safe overshoot
  double lo = 0.0;
  while (h(hi) > 0.0) {
    ++iterations;
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-6 * std::max(1.0, hi)) {
    ++iterations;
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? hi : lo) = mid;
  }
  double a = 0.5 * (lo + hi);
  for (int k = 0; k < 100; ++k) {
    ++iterations;
    const double ha = h(a);
    const double hp = 1.0 / (theta + a) - delta;
    const double next = a - ha / hp;
    if (std::abs(next - a) < 0.25 * tol * std::max(1.0, std::abs(a))) {
      a = next;
      break;
    }
    a = next;
  }
  return a;
}

}  // namespace detail

/// Generic bracketed solver route, exposed so closed forms can be
/// cross-checked against it.
inline AdjustmentResult solve_adjustment_numeric(const Distribution& dist,
                                                 double tol = 1e-12) {
  detail::require(tol >= 1e-14, ErrorCode::invalid_parameter, "tol must be >= 1e-14");
  return detail::solve_numeric(dist, tol);
}

/// The unique positive root of E[exp(-alpha X)] = 1. Closed forms where the
/// family admits one, the bracketed solver otherwise.
inline AdjustmentResult adjustment_coefficient(const Distribution& dist,
                                               double tol = 1e-12) {
  detail::require(tol >= 1e-14, ErrorCode::invalid_parameter, "tol must be >= 1e-14");

  AdjustmentResult r;
  r.solver.method = SolveMethod::closed_form;
  r.solver.iterations = 0;

  switch (dist.family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(dist.spec().params);
      r.alpha = 2.0 * g.mu / (g.sigma * g.sigma);
      break;
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(dist.spec().params);
      r.alpha = e.p * e.mu - (1.0 - e.p) * e.theta;
      break;
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(dist.spec().params);
      r.alpha = detail::shifted_exponential_alpha(s.theta, s.delta, tol,
                                                  r.solver.iterations);
      break;
    }
    case Family::two_point: {
      const auto& t = std::get<TwoPointParams>(dist.spec().params);
      if (t.x_plus == -t.x_minus) {
        r.alpha = std::log(t.p_plus / (1.0 - t.p_plus)) / t.x_plus;
        break;
      }
      return detail::solve_numeric(dist, tol);
    }
    case Family::finite_support:
    case Family::lomax_mix:
      return detail::solve_numeric(dist, tol);
  }

  r.riskiness = 1.0 / r.alpha;
  r.gaussian_rate = std::isfinite(dist.variance()) && dist.variance() > 0.0
                        ? 2.0 * dist.mean() / dist.variance()
                        : num::kNaN;
  r.solver.residual = std::abs(dist.neg_exp_moment(r.alpha) - 1.0);
  r.solver.tolerance_met = r.solver.residual <= std::max(tol, 1e-12);
  return r;
}

}  // namespace lundberg
