#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lundberg/errors.hpp"
#include "lundberg/math.hpp"
#include "lundberg/rng.hpp"

namespace lundberg {

enum class Family {
  gaussian,
  double_exponential,
  shifted_exponential,
  two_point,
  finite_support,
  lomax_mix,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::double_exponential: return "double_exponential";
    case Family::shifted_exponential: return "shifted_exponential";
    case Family::two_point: return "two_point";
    case Family::finite_support: return "finite_support";
    case Family::lomax_mix: return "lomax_mix";
  }
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view s) {
  for (Family f : {Family::gaussian, Family::double_exponential,
                   Family::shifted_exponential, Family::two_point,
                   Family::finite_support, Family::lomax_mix}) {
    if (s == family_name(f)) return f;
  }
  return std::nullopt;
}

struct Atom {
  double x;
  double p;
};

struct GaussianParams {
  double mu;
  double sigma;
};

/// Density p*theta*exp(-theta x) for x>0, (1-p)*mu*exp(mu x) for x<0.
struct DoubleExponentialParams {
  double p;
  double theta;
  double mu;
};

/// Exponential with mean 1/theta shifted down by delta.
struct ShiftedExponentialParams {
  double theta;
  double delta;
};

struct TwoPointParams {
  double x_minus;
  double x_plus;
  double p_plus;
};

struct FiniteSupportParams {
  std::vector<Atom> atoms;
};

/// Density (1-q)*lambda*exp(lambda x) for x<0 and
/// q*(gamma/s)*(1+x/s)^-(gamma+1) for x>=0. Light left tail, power-law right.
struct LomaxMixParams {
  double q;
  double lambda;
  double s;
  double gamma;
};

struct DistributionSpec {
  std::variant<GaussianParams, DoubleExponentialParams, ShiftedExponentialParams,
               TwoPointParams, FiniteSupportParams, LomaxMixParams>
      params;

  Family family() const { return static_cast<Family>(params.index()); }

  static DistributionSpec gaussian(double mu, double sigma) {
    return {GaussianParams{mu, sigma}};
  }
  static DistributionSpec double_exponential(double p, double theta, double mu) {
    return {DoubleExponentialParams{p, theta, mu}};
  }
  static DistributionSpec shifted_exponential(double theta, double delta) {
    return {ShiftedExponentialParams{theta, delta}};
  }
  static DistributionSpec two_point(double x_minus, double x_plus, double p_plus) {
    return {TwoPointParams{x_minus, x_plus, p_plus}};
  }
  static DistributionSpec finite_support(std::vector<Atom> atoms) {
    return {FiniteSupportParams{std::move(atoms)}};
  }
  static DistributionSpec lomax_mix(double q, double lambda, double s, double gamma) {
    return {LomaxMixParams{q, lambda, s, gamma}};
  }
};

/// Validated increment law with cached moments and support bounds.
/// Immutable after validation; all member operations are const and pure given
/// the caller-owned RngStream.
class Distribution {
 public:
  Family family() const { return spec_.family(); }
  const DistributionSpec& spec() const { return spec_; }

  double mean() const { return mean_; }
  double variance() const { return variance_; }  // +inf when undefined
  double essential_inf() const { return ei_; }
  double essential_sup() const { return es_; }

  /// Smallest t where E[exp(-tX)] stops being finite (+inf if none).
  double divergence_rate() const { return divergence_; }

  bool is_atomic() const {
    return family() == Family::two_point || family() == Family::finite_support;
  }
  const std::vector<Atom>& atoms() const { return atoms_; }

  /// True when the unrestricted excess supremum over the right tail is
  /// infinite (power-law tail).
  bool heavy_right_excess() const { return family() == Family::lomax_mix; }

  bool has_density() const { return !is_atomic(); }
  double density(double x) const;

  double neg_exp_moment(double t) const;
  double neg_exp_moment_derivative(double t) const;
  double cond_upper_exp_moment(double alpha, double x) const;
  double cond_lower_exp_moment(double alpha, double x) const;
  double sample(RngStream& rng) const;

  /// Coarse magnitude bound on a single increment, used by overflow guards.
  double increment_scale_hint() const;

  friend Distribution validate(const DistributionSpec& spec);

 private:
  Distribution() = default;

  DistributionSpec spec_{GaussianParams{1.0, 1.0}};
  double mean_ = 0.0;
  double variance_ = 0.0;
  double ei_ = -num::kInf;
  double es_ = num::kInf;
  double divergence_ = num::kInf;
  std::vector<Atom> atoms_;      // sorted, only for atomic families
  std::vector<double> cum_;      // cumulative probabilities for sampling
};

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) raise(code, msg);
}

inline void require_finite(double v, const std::string& name) {
  require(std::isfinite(v), ErrorCode::invalid_parameter, name + " must be finite");
}

/// E[exp(-t L)] for L ~ Lomax(gamma, scale c), written so large c stays stable:
/// (gamma/c) * int_0^inf exp(-t u) (1+u/c)^-(gamma+1) du.
inline double lomax_tail_transform(double t, double c, double gamma,
                                   double rel_tol = 1e-10) {
  if (t == 0.0) return 1.0;
  return (gamma / c) * num::integrate(
                           [=](double u) {
                             return std::exp(-t * u) *
                                    std::pow(1.0 + u / c, -(gamma + 1.0));
                           },
                           0.0, num::kInf, rel_tol);
}

inline double lomax_tail_transform_derivative(double t, double c, double gamma,
                                              double rel_tol = 1e-10) {
  return -(gamma / c) * num::integrate(
                            [=](double u) {
                              return u * std::exp(-t * u) *
                                     std::pow(1.0 + u / c, -(gamma + 1.0));
                            },
                            0.0, num::kInf, rel_tol);
}

}  // namespace detail

inline Distribution validate(const DistributionSpec& spec) {
  using detail::require;
  using detail::require_finite;

  Distribution d;
  d.spec_ = spec;

  switch (spec.family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec.params);
      require_finite(g.mu, "mu");
      require_finite(g.sigma, "sigma");
      require(g.sigma > 0.0, ErrorCode::invalid_parameter, "gaussian requires sigma > 0");
      require(g.mu > 0.0, ErrorCode::invalid_parameter, "gaussian requires mu > 0");
      d.mean_ = g.mu;
      d.variance_ = g.sigma * g.sigma;
      d.ei_ = -num::kInf;
      d.es_ = num::kInf;
      d.divergence_ = num::kInf;
      break;
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(spec.params);
      require_finite(e.p, "p");
      require_finite(e.theta, "theta");
      require_finite(e.mu, "mu");
      require(e.theta > 0.0, ErrorCode::invalid_parameter, "double_exponential requires theta > 0");
      require(e.mu > 0.0, ErrorCode::invalid_parameter, "double_exponential requires mu > 0");
      require(e.p > e.theta / (e.mu + e.theta) && e.p < 1.0, ErrorCode::invalid_parameter,
              "double_exponential requires theta/(mu+theta) < p < 1");
      d.mean_ = e.p / e.theta - (1.0 - e.p) / e.mu;
      d.variance_ = 2.0 * e.p / (e.theta * e.theta) +
                    2.0 * (1.0 - e.p) / (e.mu * e.mu) - d.mean_ * d.mean_;
      d.ei_ = -num::kInf;
      d.es_ = num::kInf;
      d.divergence_ = e.mu;
      break;
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec.params);
      require_finite(s.theta, "theta");
      require_finite(s.delta, "delta");
      require(s.theta > 0.0, ErrorCode::invalid_parameter, "shifted_exponential requires theta > 0");
      require(s.delta > 0.0 && s.delta < 1.0 / s.theta, ErrorCode::invalid_parameter,
              "shifted_exponential requires 0 < delta < 1/theta");
      d.mean_ = 1.0 / s.theta - s.delta;
      d.variance_ = 1.0 / (s.theta * s.theta);
      d.ei_ = -s.delta;
      d.es_ = num::kInf;
      d.divergence_ = num::kInf;
      break;
    }
    case Family::two_point: {
      const auto& t = std::get<TwoPointParams>(spec.params);
      require_finite(t.x_minus, "x_minus");
      require_finite(t.x_plus, "x_plus");
      require_finite(t.p_plus, "p_plus");
      require(t.p_plus > 0.0 && t.p_plus < 1.0, ErrorCode::invalid_parameter,
              "two_point requires p_plus in (0,1)");
      require(t.x_minus < 0.0, ErrorCode::no_negative_mass, "two_point requires x_minus < 0");
      require(t.x_plus > 0.0, ErrorCode::invalid_parameter, "two_point requires x_plus > 0");
      d.atoms_ = {{t.x_minus, 1.0 - t.p_plus}, {t.x_plus, t.p_plus}};
      break;
    }
    case Family::finite_support: {
      const auto& f = std::get<FiniteSupportParams>(spec.params);
      require(!f.atoms.empty(), ErrorCode::invalid_parameter, "finite_support requires atoms");
      double psum = 0.0;
      for (const Atom& a : f.atoms) {
        require_finite(a.x, "atom value");
        require_finite(a.p, "atom probability");
        require(a.p > 0.0, ErrorCode::invalid_parameter, "atom probabilities must be positive");
        psum += a.p;
      }
      require(std::abs(psum - 1.0) <= 1e-12, ErrorCode::invalid_parameter,
              "atom probabilities must sum to 1 within 1e-12");
      d.atoms_ = f.atoms;
      std::sort(d.atoms_.begin(), d.atoms_.end(),
                [](const Atom& a, const Atom& b) { return a.x < b.x; });
      for (std::size_t i = 1; i < d.atoms_.size(); ++i) {
        require(d.atoms_[i].x > d.atoms_[i - 1].x, ErrorCode::invalid_parameter,
                "atoms must be distinct");
      }
      require(d.atoms_.front().x < 0.0, ErrorCode::no_negative_mass,
              "finite_support requires at least one negative atom");
      break;
    }
    case Family::lomax_mix: {
      const auto& l = std::get<LomaxMixParams>(spec.params);
      require_finite(l.q, "q");
      require_finite(l.lambda, "lambda");
      require_finite(l.s, "s");
      require_finite(l.gamma, "gamma");
      require(l.gamma > 1.0, ErrorCode::invalid_parameter, "lomax_mix requires gamma > 1");
      require(l.s > 0.0, ErrorCode::invalid_parameter, "lomax_mix requires s > 0");
      require(l.lambda > 0.0, ErrorCode::invalid_parameter, "lomax_mix requires lambda > 0");
      require(l.q > 0.0 && l.q < 1.0, ErrorCode::invalid_parameter,
              "lomax_mix requires q in (0,1)");
      d.mean_ = l.q * l.s / (l.gamma - 1.0) - (1.0 - l.q) / l.lambda;
      d.variance_ =
          l.gamma > 2.0
              ? l.q * 2.0 * l.s * l.s / ((l.gamma - 1.0) * (l.gamma - 2.0)) +
                    (1.0 - l.q) * 2.0 / (l.lambda * l.lambda) - d.mean_ * d.mean_
              : num::kInf;
      d.ei_ = -num::kInf;
      d.es_ = num::kInf;
      d.divergence_ = l.lambda;
      break;
    }
  }

  if (d.is_atomic()) {
    // Normalize so the cumulative table ends at exactly 1.
    double psum = 0.0;
    for (const Atom& a : d.atoms_) psum += a.p;
    d.cum_.reserve(d.atoms_.size());
    double acc = 0.0;
    double m1 = 0.0, m2 = 0.0;
    for (Atom& a : d.atoms_) {
      a.p /= psum;
      acc += a.p;
      d.cum_.push_back(acc);
      m1 += a.p * a.x;
      m2 += a.p * a.x * a.x;
    }
    d.cum_.back() = 1.0;
    d.mean_ = m1;
    d.variance_ = m2 - m1 * m1;
    d.ei_ = d.atoms_.front().x;
    d.es_ = d.atoms_.back().x;
    d.divergence_ = num::kInf;
  }

  detail::require(d.mean_ > 0.0, ErrorCode::non_positive_mean,
                  "increment law must have positive mean");
  detail::require(d.ei_ < 0.0, ErrorCode::no_negative_mass,
                  "increment law must put mass below 0");
  return d;
}

inline double Distribution::density(double x) const {
  switch (family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec_.params);
      return num::norm_pdf((x - g.mu) / g.sigma) / g.sigma;
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(spec_.params);
      return x >= 0.0 ? e.p * e.theta * std::exp(-e.theta * x)
                      : (1.0 - e.p) * e.mu * std::exp(e.mu * x);
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec_.params);
      return x < -s.delta ? 0.0 : s.theta * std::exp(-s.theta * (x + s.delta));
    }
    case Family::lomax_mix: {
      const auto& l = std::get<LomaxMixParams>(spec_.params);
      return x < 0.0 ? (1.0 - l.q) * l.lambda * std::exp(l.lambda * x)
                     : l.q * (l.gamma / l.s) *
                           std::pow(1.0 + x / l.s, -(l.gamma + 1.0));
    }
    default:
      raise(ErrorCode::invalid_parameter, "atomic family has no density");
  }
}

inline double Distribution::neg_exp_moment(double t) const {
  detail::require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_parameter,
                  "t must be a nonnegative real");
  if (t >= divergence_) {
    raise(ErrorCode::moment_diverges,
          "E[exp(-tX)] diverges at t = " + std::to_string(t));
  }
  if (t == 0.0) return 1.0;
  switch (family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec_.params);
      return std::exp(-t * g.mu + 0.5 * t * t * g.sigma * g.sigma);
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(spec_.params);
      return e.p * e.theta / (e.theta + t) + (1.0 - e.p) * e.mu / (e.mu - t);
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec_.params);
      return std::exp(t * s.delta) * s.theta / (s.theta + t);
    }
    case Family::two_point:
    case Family::finite_support: {
      double acc = 0.0;
      for (const Atom& a : atoms_) acc += a.p * std::exp(-t * a.x);
      return acc;
    }
    case Family::lomax_mix: {
      const auto& l = std::get<LomaxMixParams>(spec_.params);
      return (1.0 - l.q) * l.lambda / (l.lambda - t) +
             l.q * detail::lomax_tail_transform(t, l.s, l.gamma);
    }
  }
  return num::kNaN;
}

inline double Distribution::neg_exp_moment_derivative(double t) const {
  detail::require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_parameter,
                  "t must be a nonnegative real");
  if (t >= divergence_) {
    raise(ErrorCode::moment_diverges,
          "E[X exp(-tX)] diverges at t = " + std::to_string(t));
  }
  switch (family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec_.params);
      return neg_exp_moment(t) * (t * g.sigma * g.sigma - g.mu);
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(spec_.params);
      return -e.p * e.theta / ((e.theta + t) * (e.theta + t)) +
             (1.0 - e.p) * e.mu / ((e.mu - t) * (e.mu - t));
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec_.params);
      return neg_exp_moment(t) * (s.delta - 1.0 / (s.theta + t));
    }
    case Family::two_point:
    case Family::finite_support: {
      double acc = 0.0;
      for (const Atom& a : atoms_) acc -= a.p * a.x * std::exp(-t * a.x);
      return acc;
    }
    case Family::lomax_mix: {
      const auto& l = std::get<LomaxMixParams>(spec_.params);
      return (1.0 - l.q) * l.lambda / ((l.lambda - t) * (l.lambda - t)) +
             l.q * detail::lomax_tail_transform_derivative(t, l.s, l.gamma);
    }
  }
  return num::kNaN;
}

inline double Distribution::cond_upper_exp_moment(double alpha, double x) const {
  detail::require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::invalid_parameter,
                  "alpha must be positive");
  switch (family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec_.params);
      const double z = (x - g.mu) / g.sigma;
      const double log_e = -alpha * (g.mu - x) +
                           0.5 * alpha * alpha * g.sigma * g.sigma +
                           num::log_norm_sf(z + alpha * g.sigma) -
                           num::log_norm_sf(z);
      return std::exp(std::min(log_e, 0.0));
    }
    case Family::double_exponential: {
      detail::require(x >= 0.0, ErrorCode::invalid_parameter,
                      "x must lie in (0, es_F)");
      const auto& e = std::get<DoubleExponentialParams>(spec_.params);
      return e.theta / (e.theta + alpha);  // memoryless right tail
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec_.params);
      if (x <= -s.delta) {
        return std::exp(alpha * (x + s.delta)) * s.theta / (s.theta + alpha);
      }
      return s.theta / (s.theta + alpha);
    }
    case Family::two_point:
    case Family::finite_support: {
      double num_acc = 0.0, den = 0.0;
      for (const Atom& a : atoms_) {
        if (a.x >= x) {
          num_acc += a.p * std::exp(-alpha * (a.x - x));
          den += a.p;
        }
      }
      if (den <= 0.0) {
        raise(ErrorCode::empty_conditioning_set, "no mass at or above x");
      }
      return num_acc / den;
    }
    case Family::lomax_mix: {
      detail::require(x >= 0.0, ErrorCode::invalid_parameter,
                      "x must lie in (0, es_F)");
      const auto& l = std::get<LomaxMixParams>(spec_.params);
      // L(X - x | X >= x) is Lomax(gamma, s + x); weight q cancels.
      return detail::lomax_tail_transform(alpha, l.s + x, l.gamma);
    }
  }
  return num::kNaN;
}

inline double Distribution::cond_lower_exp_moment(double alpha, double x) const {
  detail::require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::invalid_parameter,
                  "alpha must be positive");
  switch (family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec_.params);
      const double z = (x - g.mu) / g.sigma;
      const double log_e = alpha * (x - g.mu) +
                           0.5 * alpha * alpha * g.sigma * g.sigma +
                           num::log_norm_cdf(z + alpha * g.sigma) -
                           num::log_norm_cdf(z);
      return std::exp(std::max(log_e, 0.0));
    }
    case Family::double_exponential: {
      detail::require(x <= 0.0, ErrorCode::invalid_parameter,
                      "x must lie in (ei_F, 0)");
      const auto& e = std::get<DoubleExponentialParams>(spec_.params);
      if (alpha >= e.mu) {
        raise(ErrorCode::moment_diverges, "left conditional moment diverges");
      }
      return e.mu / (e.mu - alpha);  // memoryless left tail
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec_.params);
      if (x <= -s.delta) {
        raise(ErrorCode::empty_conditioning_set, "no mass below x");
      }
      const double c = x + s.delta;
      return std::exp(alpha * c) * s.theta / (s.theta + alpha) *
             (-std::expm1(-(s.theta + alpha) * c)) /
             (-std::expm1(-s.theta * c));
    }
    case Family::two_point:
    case Family::finite_support: {
      double num_acc = 0.0, den = 0.0;
      for (const Atom& a : atoms_) {
        if (a.x < x) {
          num_acc += a.p * std::exp(alpha * (x - a.x));
          den += a.p;
        }
      }
      if (den <= 0.0) raise(ErrorCode::empty_conditioning_set, "no mass below x");
      return num_acc / den;
    }
    case Family::lomax_mix: {
      detail::require(x <= 0.0, ErrorCode::invalid_parameter,
                      "x must lie in (ei_F, 0)");
      const auto& l = std::get<LomaxMixParams>(spec_.params);
      if (alpha >= l.lambda) {
        raise(ErrorCode::moment_diverges, "left conditional moment diverges");
      }
      return l.lambda / (l.lambda - alpha);  // memoryless left tail
    }
  }
  return num::kNaN;
}

inline double Distribution::sample(RngStream& rng) const {
  switch (family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec_.params);
      return g.mu + g.sigma * rng.normal();
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(spec_.params);
      return rng.bernoulli(e.p) ? rng.exponential() / e.theta
                                : -rng.exponential() / e.mu;
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec_.params);
      return rng.exponential() / s.theta - s.delta;
    }
    case Family::two_point:
    case Family::finite_support: {
      const double u = rng.uniform();
      const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
      return atoms_[static_cast<std::size_t>(it - cum_.begin())].x;
    }
    case Family::lomax_mix: {
      const auto& l = std::get<LomaxMixParams>(spec_.params);
      if (rng.bernoulli(l.q)) {
        return l.s * (std::pow(rng.uniform(), -1.0 / l.gamma) - 1.0);
      }
      return -rng.exponential() / l.lambda;
    }
  }
  return num::kNaN;
}

inline double Distribution::increment_scale_hint() const {
  if (std::isfinite(ei_) && std::isfinite(es_)) {
    return std::max(-ei_, es_);
  }
  if (std::isfinite(variance_)) {
    return std::abs(mean_) + 12.0 * std::sqrt(variance_);
  }
  const auto& l = std::get<LomaxMixParams>(spec_.params);
  return std::abs(mean_) + 100.0 * l.s;
}

}  // namespace lundberg
