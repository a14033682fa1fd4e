// Shared test oracles, kept independent of the library's computation paths:
// direct erfc-based normal CDF, an adaptive Simpson integrator (the library
// integrates with Gauss-Kronrod), a gambler's-ruin hitting-probability solver,
// and exact law recursions for the embedding schemes.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

namespace oracle {

inline double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// ---------------------------------------------------------------------------
// Adaptive Simpson on a finite interval.
// ---------------------------------------------------------------------------

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace detail

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double eps = 1e-12) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, 48);
}

// ---------------------------------------------------------------------------
// Gambler's ruin for the +-1 walk with up-probability p: probability of ever
// reaching -k, computed by shooting on the hitting recursion
// h(s) = p h(s+1) + (1-p) h(s-1) with h(-k) = 1, h(N) = 0 for large N.
// ---------------------------------------------------------------------------

inline double ruin_probability(double p, int k, int horizon = 400) {
  auto terminal = [&](double first) {
    // h(-k) = 1, h(-k+1) = first; recurse upward and return h(horizon).
    double prev = 1.0, cur = first;
    for (int s = -k + 1; s < horizon; ++s) {
      const double next = (cur - (1.0 - p) * prev) / p;
      prev = cur;
      cur = next;
    }
    return cur;
  };
  // terminal is affine in the unknown h(-k+1); solve terminal(x) = 0.
  const double t0 = terminal(0.0);
  const double t1 = terminal(1.0);
  const double x = -t0 / (t1 - t0);
  // walk forward once more to read off h(0)
  double prev = 1.0, cur = x;
  for (int s = -k + 1; s < 0; ++s) {
    const double next = (cur - (1.0 - p) * prev) / p;
    prev = cur;
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Exact embedded laws of the Chacon-Walsh chains, from first principles.
// Atom lists are (value, probability), sorted increasing, probabilities
// summing to 1.
// ---------------------------------------------------------------------------

using AtomList = std::vector<std::pair<double, double>>;

inline double mean_of(const AtomList& f) {
  double px = 0.0, p = 0.0;
  for (auto [x, q] : f) {
    px += q * x;
    p += q;
  }
  return px / p;
}

inline AtomList renormalized(AtomList f) {
  double p = 0.0;
  for (auto& [x, q] : f) p += q;
  for (auto& [x, q] : f) q /= p;
  return f;
}

inline void accumulate(std::map<double, double>& law, const AtomList& f,
                       double weight) {
  for (auto [x, q] : f) law[x] += weight * q;
}

inline void dubins_law_rec(const AtomList& f, double weight,
                           std::map<double, double>& law) {
  if (f.size() == 1) {
    law[f[0].first] += weight;
    return;
  }
  const double m = mean_of(f);
  AtomList lower, upper;
  for (auto [x, q] : f) (x < m ? lower : upper).push_back({x, q});
  const double a = mean_of(lower);
  const double b = mean_of(upper);
  const double p_top = (m - a) / (b - a);
  dubins_law_rec(renormalized(upper), weight * p_top, law);
  dubins_law_rec(renormalized(lower), weight * (1.0 - p_top), law);
}

inline std::map<double, double> dubins_law(const AtomList& f) {
  std::map<double, double> law;
  dubins_law_rec(f, 1.0, law);
  return law;
}

inline std::map<double, double> ay_law(const AtomList& f) {
  const std::size_t k = f.size();
  std::vector<double> h(k);  // suffix barycenters
  double px = 0.0, p = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    px += f[j].second * f[j].first;
    p += f[j].second;
    h[j] = px / p;
  }
  std::map<double, double> law;
  double reach = 1.0;
  double pos = h[0];
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double p_bottom = (h[j + 1] - pos) / (h[j + 1] - f[j].first);
    law[f[j].first] += reach * p_bottom;
    reach *= 1.0 - p_bottom;
    pos = h[j + 1];
  }
  law[f[k - 1].first] += reach;
  return law;
}

inline AtomList reflected(const AtomList& f) {
  AtomList r;
  for (std::size_t i = f.size(); i-- > 0;) r.push_back({-f[i].first, f[i].second});
  return r;
}

inline std::map<double, double> ay_minus_law(const AtomList& f) {
  std::map<double, double> law;
  for (auto [x, q] : ay_law(reflected(f))) law[-x] += q;
  return law;
}

inline std::map<double, double> day_law(const AtomList& f) {
  if (f.size() == 1) return {{f[0].first, 1.0}};
  const double m = mean_of(f);
  AtomList lower, upper;
  for (auto [x, q] : f) (x < m ? lower : upper).push_back({x, q});
  const double a = mean_of(lower);
  const double b = mean_of(upper);
  const double p_top = (m - a) / (b - a);
  std::map<double, double> law;
  for (auto [x, q] : ay_law(renormalized(upper))) law[x] += p_top * q;
  for (auto [x, q] : ay_minus_law(renormalized(lower))) law[x] += (1.0 - p_top) * q;
  return law;
}

}  // namespace oracle
