#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lundberg/adjustment.hpp"
#include "lundberg/bounds.hpp"
#include "lundberg/distribution.hpp"
#include "lundberg/embedding.hpp"
#include "lundberg/errors.hpp"
#include "lundberg/excess.hpp"
#include "lundberg/montecarlo.hpp"

namespace lundberg {

enum class Subcommand { alpha, excess, bounds, simulate, embed, report };
enum class SimulateMode { max, min, martingale };
enum class EmbedScheme { dubins, ay, ay_minus, day };
enum class OutputFormat { csv, json, text };

inline const char* scheme_name(EmbedScheme s) {
  switch (s) {
    case EmbedScheme::dubins: return "dubins";
    case EmbedScheme::ay: return "ay";
    case EmbedScheme::ay_minus: return "ay-minus";
    case EmbedScheme::day: return "day";
  }
  return "?";
}

struct RunConfig {
  Subcommand subcommand = Subcommand::alpha;
  std::string dist_path;
  SimulateMode mode = SimulateMode::max;
  EmbedScheme scheme = EmbedScheme::day;
  double d = 1.0;
  std::vector<double> xs;
  std::uint64_t n = 100000;
  std::uint64_t seed = kDefaultSeed;
  double eps = 1e-6;
  std::optional<double> cap;
  std::uint64_t steps = 10;
  OutputFormat output = OutputFormat::text;
};

// ---------------------------------------------------------------------------
// Spec files: {"family": <string>, "params": {...}}; unknown fields rejected.
// ---------------------------------------------------------------------------

namespace detail {

inline double json_number(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) {
    raise(ErrorCode::parse_error, std::string("missing param \"") + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    raise(ErrorCode::parse_error, std::string("param \"") + key + "\" must be a number");
  }
  return v.get<double>();
}

inline void reject_unknown(const nlohmann::json& obj,
                           std::initializer_list<const char*> keys) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      raise(ErrorCode::parse_error, "unknown field \"" + item.key() + "\"");
    }
  }
}

}  // namespace detail

inline DistributionSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) raise(ErrorCode::parse_error, "spec must be a JSON object");
  detail::reject_unknown(j, {"family", "params"});
  if (!j.contains("family") || !j.at("family").is_string()) {
    raise(ErrorCode::parse_error, "spec needs a string \"family\" field");
  }
  if (!j.contains("params") || !j.at("params").is_object()) {
    raise(ErrorCode::parse_error, "spec needs an object \"params\" field");
  }
  const auto fam = family_from_name(j.at("family").get<std::string>());
  if (!fam) {
    raise(ErrorCode::parse_error,
          "unknown family \"" + j.at("family").get<std::string>() + "\"");
  }
  const nlohmann::json& p = j.at("params");
  switch (*fam) {
    case Family::gaussian:
      detail::reject_unknown(p, {"mu", "sigma"});
      return DistributionSpec::gaussian(detail::json_number(p, "mu"),
                                        detail::json_number(p, "sigma"));
    case Family::double_exponential:
      detail::reject_unknown(p, {"p", "theta", "mu"});
      return DistributionSpec::double_exponential(detail::json_number(p, "p"),
                                                  detail::json_number(p, "theta"),
                                                  detail::json_number(p, "mu"));
    case Family::shifted_exponential:
      detail::reject_unknown(p, {"theta", "delta"});
      return DistributionSpec::shifted_exponential(detail::json_number(p, "theta"),
                                                   detail::json_number(p, "delta"));
    case Family::two_point:
      detail::reject_unknown(p, {"x_minus", "x_plus", "p_plus"});
      return DistributionSpec::two_point(detail::json_number(p, "x_minus"),
                                         detail::json_number(p, "x_plus"),
                                         detail::json_number(p, "p_plus"));
    case Family::finite_support: {
      detail::reject_unknown(p, {"atoms"});
      if (!p.contains("atoms") || !p.at("atoms").is_array()) {
        raise(ErrorCode::parse_error, "finite_support needs an \"atoms\" array");
      }
      std::vector<Atom> atoms;
      for (const auto& pair : p.at("atoms")) {
        if (!pair.is_array() || pair.size() != 2 || !pair.at(0).is_number() ||
            !pair.at(1).is_number()) {
          raise(ErrorCode::parse_error, "each atom must be a [value, probability] pair");
        }
        atoms.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
      }
      return DistributionSpec::finite_support(std::move(atoms));
    }
    case Family::lomax_mix:
      detail::reject_unknown(p, {"q", "lambda", "s", "gamma"});
      return DistributionSpec::lomax_mix(
          detail::json_number(p, "q"), detail::json_number(p, "lambda"),
          detail::json_number(p, "s"), detail::json_number(p, "gamma"));
  }
  raise(ErrorCode::parse_error, "unreachable family");
}

inline DistributionSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::parse_error, "cannot open \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::parse_error, std::string("invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

inline nlohmann::json spec_to_json(const DistributionSpec& spec) {
  nlohmann::json p;
  switch (spec.family()) {
    case Family::gaussian: {
      const auto& g = std::get<GaussianParams>(spec.params);
      p = {{"mu", g.mu}, {"sigma", g.sigma}};
      break;
    }
    case Family::double_exponential: {
      const auto& e = std::get<DoubleExponentialParams>(spec.params);
      p = {{"p", e.p}, {"theta", e.theta}, {"mu", e.mu}};
      break;
    }
    case Family::shifted_exponential: {
      const auto& s = std::get<ShiftedExponentialParams>(spec.params);
      p = {{"theta", s.theta}, {"delta", s.delta}};
      break;
    }
    case Family::two_point: {
      const auto& t = std::get<TwoPointParams>(spec.params);
      p = {{"x_minus", t.x_minus}, {"x_plus", t.x_plus}, {"p_plus", t.p_plus}};
      break;
    }
    case Family::finite_support: {
      auto arr = nlohmann::json::array();
      for (const Atom& a : std::get<FiniteSupportParams>(spec.params).atoms) {
        arr.push_back({a.x, a.p});
      }
      p = {{"atoms", arr}};
      break;
    }
    case Family::lomax_mix: {
      const auto& l = std::get<LomaxMixParams>(spec.params);
      p = {{"q", l.q}, {"lambda", l.lambda}, {"s", l.s}, {"gamma", l.gamma}};
      break;
    }
  }
  return {{"family", family_name(spec.family())}, {"params", p}};
}

// ---------------------------------------------------------------------------
// Report serialization.
// ---------------------------------------------------------------------------

/// 12 significant digits, '.' decimal (CSV contract).
inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline nlohmann::json to_json(const AdjustmentResult& r) {
  return {{"alpha", r.alpha},
          {"riskiness", r.riskiness},
          {"gaussian_rate", r.gaussian_rate},
          {"solver",
           {{"method", solve_method_name(r.solver.method)},
            {"iterations", r.solver.iterations},
            {"residual", r.solver.residual},
            {"tolerance_met", r.solver.tolerance_met}}}};
}

inline nlohmann::json to_json(const ExcessConstants& c) {
  nlohmann::json j = {{"d_plus", c.finite_plus ? nlohmann::json(c.d_plus)
                                               : nlohmann::json()},
                      {"d_minus", c.finite_minus ? nlohmann::json(c.d_minus)
                                                 : nlohmann::json()},
                      {"d_zero", c.finite_plus && c.finite_minus
                                     ? nlohmann::json(c.d_zero)
                                     : nlohmann::json()},
                      {"finite_plus", c.finite_plus},
                      {"finite_minus", c.finite_minus}};
  j["argmax_plus"] = c.argmax_plus ? nlohmann::json(*c.argmax_plus) : nlohmann::json();
  j["argmax_minus"] = c.argmax_minus ? nlohmann::json(*c.argmax_minus) : nlohmann::json();
  j["cap"] = c.cap ? nlohmann::json(*c.cap) : nlohmann::json();
  return j;
}

inline nlohmann::json to_json(const BoundsReport& r) {
  nlohmann::json tail = nlohmann::json::array();
  for (const auto& row : r.min_tail) {
    tail.push_back({{"x", row.x}, {"lower", row.lower}, {"upper", row.upper}});
  }
  nlohmann::json bm_tail = nlohmann::json::array();
  for (const auto& row : r.bm_reference.tail) {
    bm_tail.push_back({{"x", row.x}, {"value", row.value}});
  }
  nlohmann::json j = {
      {"alpha", r.alpha},
      {"d", r.d},
      {"excess", to_json(r.excess)},
      {"emax_lower", r.emax_lower},
      {"emax_upper",
       r.emax_upper_finite ? nlohmann::json(r.emax_upper) : nlohmann::json()},
      {"emax_upper_finite", r.emax_upper_finite},
      {"min_tail", tail},
      {"bm_reference",
       {{"mu", r.bm_reference.mu},
        {"sigma", r.bm_reference.sigma},
        {"emax", r.bm_reference.emax},
        {"tail", bm_tail}}}};
  j["excess_unrestricted"] = r.excess_unrestricted
                                 ? to_json(*r.excess_unrestricted)
                                 : nlohmann::json();
  return j;
}

inline nlohmann::json to_json(const MonteCarloEstimate& e) {
  return {{"mean", e.mean},
          {"stderr", e.std_error},
          {"n", e.n},
          {"seed", e.seed},
          {"censored_fraction", e.censored_fraction}};
}

// ---------------------------------------------------------------------------
// Subcommand drivers. run() returns the process exit code: 0 success,
// 2 file/parse/validation errors, 3 numeric failures.
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_validation_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::parse_error:
    case ErrorCode::invalid_parameter:
    case ErrorCode::non_positive_mean:
    case ErrorCode::no_negative_mass:
      return true;
    default:
      return false;
  }
}

inline void csv_cell(std::ostream& os, const std::string& s, bool last = false) {
  os << s << (last ? "\n" : ",");
}

inline std::string opt_cell(std::optional<double> v) {
  return v ? fmt12(*v) : std::string();
}

inline void emit_alpha(const AdjustmentResult& r, OutputFormat fmt,
                       std::ostream& out) {
  switch (fmt) {
    case OutputFormat::json:
      out << to_json(r).dump(2) << "\n";
      break;
    case OutputFormat::csv:
      out << "quantity,value\n";
      out << "alpha," << fmt12(r.alpha) << "\n";
      out << "riskiness," << fmt12(r.riskiness) << "\n";
      out << "gaussian_rate," << fmt12(r.gaussian_rate) << "\n";
      out << "residual," << fmt12(r.solver.residual) << "\n";
      break;
    case OutputFormat::text:
      out << "alpha=" << fmt_short(r.alpha)
          << " riskiness=" << fmt_short(r.riskiness)
          << " gaussian_rate=" << fmt_short(r.gaussian_rate)
          << " method=" << solve_method_name(r.solver.method)
          << " residual=" << fmt_short(r.solver.residual) << "\n";
      break;
  }
}

inline void emit_excess(const ExcessConstants& c, OutputFormat fmt,
                        std::ostream& out) {
  switch (fmt) {
    case OutputFormat::json:
      out << to_json(c).dump(2) << "\n";
      break;
    case OutputFormat::csv:
      out << "quantity,value,argmax,finite\n";
      out << "d_plus," << (c.finite_plus ? fmt12(c.d_plus) : "inf") << ","
          << opt_cell(c.argmax_plus) << "," << (c.finite_plus ? "1" : "0") << "\n";
      out << "d_minus," << (c.finite_minus ? fmt12(c.d_minus) : "inf") << ","
          << opt_cell(c.argmax_minus) << "," << (c.finite_minus ? "1" : "0") << "\n";
      out << "d_zero,"
          << (c.finite_plus && c.finite_minus ? fmt12(c.d_zero) : "inf") << ",,"
          << (c.finite_plus && c.finite_minus ? "1" : "0") << "\n";
      break;
    case OutputFormat::text:
      out << "d_plus  = " << (c.finite_plus ? fmt_short(c.d_plus) : "inf")
          << (c.argmax_plus ? "  (argmax " + fmt_short(*c.argmax_plus) + ")" : "")
          << "\n";
      out << "d_minus = " << (c.finite_minus ? fmt_short(c.d_minus) : "inf")
          << (c.argmax_minus ? "  (argmax " + fmt_short(*c.argmax_minus) + ")" : "")
          << "\n";
      out << "d_zero  = "
          << (c.finite_plus && c.finite_minus ? fmt_short(c.d_zero) : "inf");
      if (c.cap) out << "  (cap " << fmt_short(*c.cap) << ")";
      out << "\n";
      break;
  }
}

inline void emit_bounds_csv(const Distribution& dist, const BoundsReport& r,
                            std::ostream& out) {
  out << "quantity,d_or_x,lower,exact_or_estimate,upper\n";
  out << "expected_max," << fmt12(r.d) << "," << fmt12(r.emax_lower) << ",,";
  out << (r.emax_upper_finite ? fmt12(r.emax_upper) : "inf") << "\n";
  if (dist.family() == Family::two_point) {
    const auto& t = std::get<TwoPointParams>(dist.spec().params);
    if (t.x_plus == 1.0 && t.x_minus == -1.0) {
      out << "dichotomous_expected_max," << fmt12(r.d) << ",,"
          << fmt12(dichotomous_expected_max(t.p_plus, r.d)) << ",\n";
    }
  }
  out << "bm_expected_max," << fmt12(r.d) << ",,"
      << fmt12(r.bm_reference.emax) << ",\n";
  for (const auto& row : r.min_tail) {
    out << "min_tail," << fmt12(row.x) << "," << fmt12(row.lower) << ",,"
        << fmt12(row.upper) << "\n";
  }
  for (const auto& row : r.bm_reference.tail) {
    out << "bm_min_tail," << fmt12(row.x) << ",," << fmt12(row.value) << ",\n";
  }
}

inline void emit_bounds(const Distribution& dist, const BoundsReport& r,
                        OutputFormat fmt, std::ostream& out) {
  switch (fmt) {
    case OutputFormat::json:
      out << to_json(r).dump(2) << "\n";
      break;
    case OutputFormat::csv:
      emit_bounds_csv(dist, r, out);
      break;
    case OutputFormat::text:
      out << "alpha = " << fmt_short(r.alpha) << ", d = " << fmt_short(r.d) << "\n";
      emit_excess(r.excess, OutputFormat::text, out);
      out << "E[M_d] in [" << fmt_short(r.emax_lower) << ", "
          << (r.emax_upper_finite ? fmt_short(r.emax_upper) : "inf") << "]\n";
      for (const auto& row : r.min_tail) {
        out << "P(-min > " << fmt_short(row.x) << ") in ["
            << fmt_short(row.lower) << ", " << fmt_short(row.upper) << "]\n";
      }
      out << "bm reference: mu = " << fmt_short(r.bm_reference.mu)
          << ", sigma = " << fmt_short(r.bm_reference.sigma)
          << ", E[M_d^BM] = " << fmt_short(r.bm_reference.emax) << "\n";
      break;
  }
}

struct SimRow {
  std::string quantity;
  double param;
  double estimate;
  double std_error;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<bool> in_band;
};

inline void emit_sim_rows(const std::vector<SimRow>& rows, OutputFormat fmt,
                          std::ostream& out) {
  if (fmt == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j = {{"quantity", r.quantity},
                          {"param", r.param},
                          {"estimate", r.estimate},
                          {"stderr", r.std_error}};
      j["lower_bound"] = r.lower ? nlohmann::json(*r.lower) : nlohmann::json();
      j["upper_bound"] = r.upper ? nlohmann::json(*r.upper) : nlohmann::json();
      j["in_band"] = r.in_band ? nlohmann::json(*r.in_band) : nlohmann::json();
      arr.push_back(j);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  if (fmt == OutputFormat::csv) {
    out << "quantity,param,estimate,stderr,lower_bound,upper_bound,in_band\n";
    for (const auto& r : rows) {
      out << r.quantity << "," << fmt12(r.param) << "," << fmt12(r.estimate)
          << "," << fmt12(r.std_error) << "," << opt_cell(r.lower) << ","
          << opt_cell(r.upper) << ","
          << (r.in_band ? (*r.in_band ? "1" : "0") : "") << "\n";
    }
    return;
  }
  for (const auto& r : rows) {
    out << r.quantity << "(" << fmt_short(r.param)
        << "): " << fmt_short(r.estimate) << " +- " << fmt_short(r.std_error);
    if (r.lower && r.upper) {
      out << "  bounds [" << fmt_short(*r.lower) << ", " << fmt_short(*r.upper)
          << "]";
    }
    if (r.in_band) out << (*r.in_band ? "  PASS" : "  FAIL");
    out << "\n";
  }
}

inline std::vector<SimRow> simulate_rows(const Distribution& dist,
                                         const RunConfig& cfg) {
  std::vector<SimRow> rows;
  switch (cfg.mode) {
    case SimulateMode::max: {
      const BoundsReport br =
          bounds_report(dist, cfg.d, cfg.xs, CapPolicy::cap_at_d);
      const MonteCarloEstimate e =
          estimate_expected_max(dist, cfg.d, cfg.n, cfg.seed);
      const bool ok = e.mean >= br.emax_lower - 3.0 * e.std_error &&
                      (!br.emax_upper_finite ||
                       e.mean <= br.emax_upper + 3.0 * e.std_error);
      rows.push_back({"expected_max", cfg.d, e.mean, e.std_error, br.emax_lower,
                      br.emax_upper_finite ? std::optional<double>(br.emax_upper)
                                           : std::nullopt,
                      ok});
      break;
    }
    case SimulateMode::min: {
      std::vector<double> xs = cfg.xs;
      if (xs.empty()) xs = {0.5, 1.0, 2.0};
      std::sort(xs.begin(), xs.end());
      const BoundsReport br = bounds_report(dist, cfg.d, xs, CapPolicy::cap_at_d);
      const auto est = estimate_min_tail(dist, xs, cfg.n, cfg.seed, cfg.eps);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool ok = est[i].mean >= br.min_tail[i].lower - 3.0 * est[i].std_error &&
                        est[i].mean <= br.min_tail[i].upper + 3.0 * est[i].std_error;
        rows.push_back({"min_tail", xs[i], est[i].mean, est[i].std_error,
                        br.min_tail[i].lower, br.min_tail[i].upper, ok});
        rows.push_back({"min_tail_censored_fraction", xs[i],
                        est[i].censored_fraction, 0.0, std::nullopt, std::nullopt,
                        std::nullopt});
      }
      break;
    }
    case SimulateMode::martingale: {
      const double alpha = adjustment_coefficient(dist).alpha;
      const MonteCarloEstimate fixed =
          martingale_check(dist, alpha, cfg.steps, cfg.n, cfg.seed);
      rows.push_back({"martingale", static_cast<double>(cfg.steps), fixed.mean,
                      fixed.std_error, 1.0, 1.0,
                      std::abs(fixed.mean - 1.0) <= 4.0 * fixed.std_error});
      const MonteCarloEstimate stopped =
          stopped_martingale_check(dist, cfg.d, cfg.n, cfg.seed);
      rows.push_back({"stopped_martingale", cfg.d, stopped.mean,
                      stopped.std_error, 1.0, 1.0,
                      std::abs(stopped.mean - 1.0) <= 4.0 * stopped.std_error});
      break;
    }
  }
  return rows;
}

inline void emit_embed(const Distribution& dist, const RunConfig& cfg,
                       std::ostream& out) {
  detail::require(dist.family() == Family::finite_support,
                  ErrorCode::invalid_parameter,
                  "embed requires a finite_support law");
  const AtomicDistribution f = AtomicDistribution::from_distribution(dist);

  std::vector<std::uint64_t> counts(f.atoms.size(), 0);
  double sum_q = 0.0, sumsq_q = 0.0, sum_stop = 0.0;
  RngStream rng(cfg.seed, 0);
  for (std::uint64_t i = 0; i < cfg.n; ++i) {
    EmbeddingOutcome o;
    switch (cfg.scheme) {
      case EmbedScheme::dubins: o = dubins_embed(f, rng); break;
      case EmbedScheme::ay: o = azema_yor_embed(f, rng); break;
      case EmbedScheme::ay_minus: o = azema_yor_minus_embed(f, rng); break;
      case EmbedScheme::day: o = day_embed(f, rng); break;
    }
    ++counts[o.stopped_index];
    sum_q += o.quadratic_time;
    sumsq_q += o.quadratic_time * o.quadratic_time;
    sum_stop += o.stopped_value;
  }
  const double n = static_cast<double>(cfg.n);
  const double mean_q = sum_q / n;
  const double var_q = std::max(0.0, (sumsq_q - n * mean_q * mean_q) / (n - 1.0));
  const double se_q = std::sqrt(var_q / n);

  if (cfg.output == OutputFormat::json) {
    nlohmann::json freq = nlohmann::json::array();
    for (std::size_t i = 0; i < f.atoms.size(); ++i) {
      freq.push_back({{"atom", f.atoms[i].x},
                      {"p", f.atoms[i].p},
                      {"frequency", counts[i] / n}});
    }
    nlohmann::json j = {{"scheme", scheme_name(cfg.scheme)},
                        {"n", cfg.n},
                        {"seed", cfg.seed},
                        {"frequencies", freq},
                        {"mean_quadratic_time", mean_q},
                        {"quadratic_time_stderr", se_q},
                        {"variance", f.variance},
                        {"mean_stopped_value", sum_stop / n},
                        {"mean_of_law", f.mean}};
    out << j.dump(2) << "\n";
    return;
  }
  if (cfg.output == OutputFormat::csv) {
    out << "atom,p,frequency,binomial_stderr\n";
    for (std::size_t i = 0; i < f.atoms.size(); ++i) {
      const double p = f.atoms[i].p;
      out << fmt12(f.atoms[i].x) << "," << fmt12(p) << "," << fmt12(counts[i] / n)
          << "," << fmt12(std::sqrt(p * (1.0 - p) / n)) << "\n";
    }
    out << "mean_quadratic_time,," << fmt12(mean_q) << "," << fmt12(se_q) << "\n";
    out << "variance,," << fmt12(f.variance) << ",\n";
    return;
  }
  out << "atom        p           freq\n";
  for (std::size_t i = 0; i < f.atoms.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof line, "%-11.6g %-11.6g %-11.6g\n", f.atoms[i].x,
                  f.atoms[i].p, counts[i] / n);
    out << line;
  }
  out << "Wald check: mean quadratic_time = " << fmt_short(mean_q) << " +- "
      << fmt_short(se_q) << " vs Var(F) = " << fmt_short(f.variance) << "\n";
  out << "martingale check: mean stopped value = " << fmt_short(sum_stop / n)
      << " vs E[F] = " << fmt_short(f.mean) << "\n";
}

inline int emit_report(const Distribution& dist, const RunConfig& cfg,
                       std::ostream& out) {
  const AdjustmentResult adj = adjustment_coefficient(dist);
  out << "== adjustment ==\n";
  emit_alpha(adj, OutputFormat::text, out);

  std::vector<double> xs = cfg.xs;
  if (xs.empty()) xs = {0.5, 1.0, 2.0};
  std::sort(xs.begin(), xs.end());
  const BoundsReport br = bounds_report(dist, cfg.d, xs, CapPolicy::cap_at_d);
  out << "== excess (cap = d) ==\n";
  emit_excess(br.excess, OutputFormat::text, out);
  out << "== bounds ==\n";
  emit_bounds(dist, br, OutputFormat::text, out);

  out << "== simulation checks (n = " << cfg.n << ", seed = " << cfg.seed
      << ", 3*stderr bands) ==\n";
  bool all_ok = true;
  {
    RunConfig sub = cfg;
    sub.mode = SimulateMode::max;
    auto rows = simulate_rows(dist, sub);
    sub.mode = SimulateMode::min;
    auto rows_min = simulate_rows(dist, sub);
    rows.insert(rows.end(), rows_min.begin(), rows_min.end());
    sub.mode = SimulateMode::martingale;
    auto rows_m = simulate_rows(dist, sub);
    rows.insert(rows.end(), rows_m.begin(), rows_m.end());
    for (const auto& r : rows) {
      if (r.in_band && !*r.in_band) all_ok = false;
    }
    emit_sim_rows(rows, OutputFormat::text, out);
  }
  out << (all_ok ? "overall: PASS\n" : "overall: FAIL\n");
  return 0;
}

}  // namespace detail

/// Dispatch a parsed configuration. Output goes to `out`, one-line
/// machine-parseable diagnostics to `err`. Returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Distribution dist = validate(load_spec(cfg.dist_path));
    switch (cfg.subcommand) {
      case Subcommand::alpha:
        detail::emit_alpha(adjustment_coefficient(dist), cfg.output, out);
        break;
      case Subcommand::excess: {
        const double alpha = adjustment_coefficient(dist).alpha;
        detail::emit_excess(excess_constants(dist, alpha, cfg.cap), cfg.output, out);
        break;
      }
      case Subcommand::bounds: {
        std::vector<double> xs = cfg.xs;
        std::sort(xs.begin(), xs.end());
        const BoundsReport br = bounds_report(dist, cfg.d, xs, CapPolicy::cap_at_d);
        detail::emit_bounds(dist, br, cfg.output, out);
        break;
      }
      case Subcommand::simulate:
        detail::emit_sim_rows(detail::simulate_rows(dist, cfg), cfg.output, out);
        break;
      case Subcommand::embed:
        detail::emit_embed(dist, cfg, out);
        break;
      case Subcommand::report:
        return detail::emit_report(dist, cfg, out);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: code=" << error_code_name(e.code()) << " msg=\"" << e.what()
        << "\"\n";
    return detail::is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: code=Internal msg=\"" << e.what() << "\"\n";
    return 3;
  }
}

}  // namespace lundberg
