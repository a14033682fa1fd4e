#include "lundberg/distribution.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "lundberg/adjustment.hpp"
#include "test_util.hpp"

using namespace lundberg;

namespace {

Distribution gaussian11() { return validate(DistributionSpec::gaussian(1.0, 1.0)); }
Distribution double_exp() {
  return validate(DistributionSpec::double_exponential(0.75, 1.0, 1.0));
}
Distribution shifted_exp() {
  return validate(DistributionSpec::shifted_exponential(1.0, 0.5));
}
Distribution two_point07() {
  return validate(DistributionSpec::two_point(-1.0, 1.0, 0.7));
}
Distribution lomax() {
  return validate(DistributionSpec::lomax_mix(0.6, 6.0, 2.0, 3.0));
}

TEST(Validate, GaussianCachesMoments) {
  const Distribution d = gaussian11();
  EXPECT_DOUBLE_EQ(d.mean(), 1.0);
  EXPECT_DOUBLE_EQ(d.variance(), 1.0);
  EXPECT_EQ(d.essential_sup(), num::kInf);
  EXPECT_EQ(d.essential_inf(), -num::kInf);
}

TEST(Validate, RejectsZeroMeanTwoPoint) {
  try {
    validate(DistributionSpec::two_point(-1.0, 1.0, 0.5));
    FAIL() << "expected NonPositiveMean";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_positive_mean);
  }
}

TEST(Validate, RejectsDoubleExponentialBelowCriticalP) {
  // Example 2 precondition: theta/(mu+theta) < p, here 0.5.
  try {
    validate(DistributionSpec::double_exponential(0.4, 1.0, 1.0));
    FAIL() << "expected InvalidParameter";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_parameter);
  }
}

TEST(Validate, FamilyConstraints) {
  EXPECT_THROW(validate(DistributionSpec::gaussian(1.0, 0.0)), Error);
  EXPECT_THROW(validate(DistributionSpec::gaussian(-1.0, 1.0)), Error);
  EXPECT_THROW(validate(DistributionSpec::shifted_exponential(1.0, 1.5)), Error);
  EXPECT_THROW(validate(DistributionSpec::shifted_exponential(1.0, 0.0)), Error);
  EXPECT_THROW(validate(DistributionSpec::lomax_mix(0.6, 6.0, 2.0, 0.9)), Error);
  // probabilities off by more than 1e-12
  EXPECT_THROW(
      validate(DistributionSpec::finite_support({{-1.0, 0.5}, {2.0, 0.4}})),
      Error);
  // no negative atom
  try {
    validate(DistributionSpec::finite_support({{0.5, 0.5}, {2.0, 0.5}}));
    FAIL() << "expected NoNegativeMass";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_negative_mass);
  }
  // lomax mean must stay positive: q s/(gamma-1) <= (1-q)/lambda
  EXPECT_THROW(validate(DistributionSpec::lomax_mix(0.1, 0.2, 1.0, 3.0)), Error);
}

TEST(Validate, FiniteSupportSortsAtoms) {
  const Distribution d = validate(
      DistributionSpec::finite_support({{2.0, 0.3}, {-1.0, 0.3}, {0.5, 0.4}}));
  EXPECT_DOUBLE_EQ(d.atoms()[0].x, -1.0);
  EXPECT_DOUBLE_EQ(d.atoms()[2].x, 2.0);
  EXPECT_DOUBLE_EQ(d.essential_inf(), -1.0);
  EXPECT_DOUBLE_EQ(d.essential_sup(), 2.0);
}

// ---------------------------------------------------------------------------
// neg_exp_moment
// ---------------------------------------------------------------------------

TEST(NegExpMoment, IdentityAtZero) {
  for (const Distribution& d :
       {gaussian11(), double_exp(), shifted_exp(), two_point07(), lomax()}) {
    EXPECT_DOUBLE_EQ(d.neg_exp_moment(0.0), 1.0);
  }
}

TEST(NegExpMoment, GaussianRootAtTwiceMeanOverVariance) {
  // exp(-t mu + t^2 sigma^2/2) = 1 at t = 2 mu / sigma^2.
  EXPECT_NEAR(gaussian11().neg_exp_moment(2.0), 1.0, 1e-15);
}

TEST(NegExpMoment, ShiftedExponentialClosedForm) {
  // exp(t delta) theta/(theta+t) at t=1: exp(0.5)/2.
  const double expected = std::exp(0.5) / 2.0;
  EXPECT_NEAR(shifted_exp().neg_exp_moment(1.0), expected, 1e-15);
  EXPECT_NEAR(expected, 0.8243606354, 1e-9);
}

TEST(NegExpMoment, DivergesAtFamilyRate) {
  try {
    double_exp().neg_exp_moment(1.0);  // t = mu
    FAIL() << "expected MomentDiverges";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::moment_diverges);
  }
  EXPECT_THROW(lomax().neg_exp_moment(6.0), Error);
  EXPECT_THROW(lomax().neg_exp_moment(7.0), Error);
  EXPECT_NO_THROW(lomax().neg_exp_moment(5.9));
  EXPECT_THROW(gaussian11().neg_exp_moment(-0.5), Error);
}

// Dual-route check: closed form vs adaptive-Simpson quadrature of the density.
// Segments split at the density kinks; truncations leave integrand tails
// below 1e-16 for every t tested.
TEST(NegExpMoment, AgreesWithDensityQuadrature) {
  struct Case {
    Distribution dist;
    std::vector<double> segments;
    std::vector<double> ts;
  };
  const std::vector<Case> cases = {
      {gaussian11(), {-12.0, 0.0, 14.0}, {0.3, 1.0, 2.0, 3.0}},
      {double_exp(), {-45.0, 0.0, 10.0, 90.0}, {0.1, 0.5, 0.9}},
      {shifted_exp(), {-0.5, 0.0, 10.0, 90.0}, {0.5, 1.0, 4.0}},
      {lomax(), {-9.0, 0.0, 10.0, 120.0}, {0.5, 2.0, 3.0}},
  };
  for (const Case& c : cases) {
    for (double t : c.ts) {
      double via_density = 0.0;
      for (std::size_t i = 0; i + 1 < c.segments.size(); ++i) {
        via_density += oracle::simpson(
            [&](double x) { return std::exp(-t * x) * c.dist.density(x); },
            c.segments[i], c.segments[i + 1], 1e-13);
      }
      EXPECT_NEAR(c.dist.neg_exp_moment(t) / via_density, 1.0, 1e-8)
          << family_name(c.dist.family()) << " t=" << t;
    }
  }
}

TEST(NegExpMoment, DerivativeMatchesFiniteDifference) {
  for (const Distribution& d :
       {gaussian11(), double_exp(), shifted_exp(), two_point07(), lomax()}) {
    for (double t : {0.2, 0.8}) {
      const double h = 1e-6;
      const double fd = (d.neg_exp_moment(t + h) - d.neg_exp_moment(t - h)) / (2 * h);
      EXPECT_NEAR(d.neg_exp_moment_derivative(t), fd, 1e-5 * std::max(1.0, std::abs(fd)))
          << family_name(d.family()) << " t=" << t;
    }
  }
}

// ---------------------------------------------------------------------------
// Conditional exponential moments
// ---------------------------------------------------------------------------

TEST(CondMoments, GaussianUpperMatchesCdfOracle) {
  // (1 - Phi((x+mu)/sigma)) / (1 - Phi((x-mu)/sigma)) at alpha = 2 mu/sigma^2.
  const Distribution d = gaussian11();
  const double expected = oracle::sf(1.0) / oracle::sf(-1.0);
  EXPECT_NEAR(d.cond_upper_exp_moment(2.0, 0.0), expected, 1e-12);
  EXPECT_NEAR(expected, 0.1885734173, 1e-9);
}

TEST(CondMoments, GaussianLowerMatchesCdfOracle) {
  const Distribution d = gaussian11();
  const double expected = oracle::phi(1.0) / oracle::phi(-1.0);
  EXPECT_NEAR(d.cond_lower_exp_moment(2.0, 0.0), expected, 1e-11);
  EXPECT_NEAR(expected, 5.3029743751, 1e-9);
}

TEST(CondMoments, GaussianUpperViaTailQuadrature) {
  const Distribution d = gaussian11();
  for (double alpha : {1.0, 2.0}) {
    for (double x : {0.25, 1.0, 3.0}) {
      const double num_i = oracle::simpson(
          [&](double u) { return std::exp(-alpha * (u - x)) * d.density(u); }, x,
          x + 40.0, 1e-14);
      const double den = oracle::sf(x - 1.0);
      EXPECT_NEAR(d.cond_upper_exp_moment(alpha, x), num_i / den, 1e-9);
    }
  }
}

TEST(CondMoments, TwoPointSingleAtomAboveThreshold) {
  const Distribution d = two_point07();
  const double alpha = std::log(7.0 / 3.0);
  EXPECT_NEAR(d.cond_upper_exp_moment(alpha, 0.5), std::pow(3.0 / 7.0, 0.5), 1e-14);
  EXPECT_NEAR(d.cond_upper_exp_moment(alpha, 0.5), 0.6546536707, 1e-9);
  // single atom below -0.5: exp(alpha(-0.5 - (-1))) = exp(alpha/2)
  EXPECT_NEAR(d.cond_lower_exp_moment(alpha, -0.5), std::exp(0.5 * alpha), 1e-14);
}

TEST(CondMoments, AtomExactlyAtThreshold) {
  // conditioning set {X >= x} includes the atom; at the top atom the excess is 0.
  const Distribution d = two_point07();
  EXPECT_DOUBLE_EQ(d.cond_upper_exp_moment(2.0, 1.0), 1.0);
  // at the bottom atom from above, X - x -> 0 on {X < x}: value -> 1
  EXPECT_NEAR(d.cond_lower_exp_moment(2.0, -1.0 + 1e-12), 1.0, 1e-10);
}

TEST(CondMoments, EmptyConditioningSets) {
  const Distribution d = two_point07();
  EXPECT_THROW(d.cond_upper_exp_moment(1.0, 1.5), Error);
  EXPECT_THROW(d.cond_lower_exp_moment(1.0, -1.0), Error);
  EXPECT_THROW(shifted_exp().cond_lower_exp_moment(1.0, -0.5), Error);
}

TEST(CondMoments, LomaxUpperViaTailQuadrature) {
  const Distribution d = lomax();
  const double alpha = 3.0;
  for (double x : {0.5, 5.0, 50.0}) {
    const double num_i = oracle::simpson(
        [&](double u) { return std::exp(-alpha * (u - x)) * d.density(u); }, x,
        x + 30.0, 1e-14);
    const double den = 0.6 * std::pow(1.0 + x / 2.0, -3.0);
    EXPECT_NEAR(d.cond_upper_exp_moment(alpha, x) / (num_i / den), 1.0, 1e-8) << x;
  }
}

// Jensen directions: upper <= 1, lower >= 1 across the valid domains.
TEST(CondMoments, JensenDirections) {
  const std::vector<Distribution> dists = {gaussian11(), double_exp(),
                                           shifted_exp(), two_point07(), lomax()};
  for (const Distribution& d : dists) {
    for (double alpha : {0.5, 1.0, 2.5}) {
      for (double frac : {0.05, 0.3, 0.7, 0.95}) {
        const double hi =
            std::isfinite(d.essential_sup()) ? d.essential_sup() : 8.0;
        const double x = frac * hi;
        const double up = d.cond_upper_exp_moment(alpha, x);
        EXPECT_GT(up, 0.0);
        EXPECT_LE(up, 1.0) << family_name(d.family()) << " x=" << x;
        const double lo_dom =
            std::isfinite(d.essential_inf()) ? d.essential_inf() : -8.0;
        const double xl = frac * lo_dom;
        if (d.family() == Family::double_exponential ||
            d.family() == Family::lomax_mix) {
          if (alpha >= 1.0 && d.family() == Family::double_exponential) continue;
          if (alpha >= 6.0) continue;
        }
        EXPECT_GE(d.cond_lower_exp_moment(alpha, xl), 1.0)
            << family_name(d.family()) << " x=" << xl;
      }
    }
  }
}

// IFR ordering: the Gaussian conditional upper moment is nondecreasing in x.
TEST(CondMoments, GaussianUpperMonotoneInX) {
  const Distribution d = gaussian11();
  double prev = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.1 * i;
    const double v = d.cond_upper_exp_moment(2.0, x);
    if (i > 0) EXPECT_GE(v, prev - 1e-12) << x;
    prev = v;
  }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

TEST(Sample, TwoPointSupport) {
  const Distribution d =
      validate(DistributionSpec::two_point(-1.0, 1.0, 1.0 - 1e-9));
  RngStream rng(kDefaultSeed, 7);
  for (int i = 0; i < 10000; ++i) {
    const double v = d.sample(rng);
    EXPECT_TRUE(v == -1.0 || v == 1.0);
  }
}

TEST(Sample, MomentsWithinCltBands) {
  const std::uint64_t n = 1000000;
  struct Case {
    Distribution dist;
    std::uint64_t stream;
  };
  const std::vector<Case> cases = {{gaussian11(), 1},
                                   {double_exp(), 2},
                                   {shifted_exp(), 3},
                                   {two_point07(), 4},
                                   {lomax(), 5}};
  for (const Case& c : cases) {
    RngStream rng(kDefaultSeed, c.stream);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double v = c.dist.sample(rng);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(c.dist.variance());
    EXPECT_NEAR(mean, c.dist.mean(), 4.0 * sd / std::sqrt((double)n))
        << family_name(c.dist.family());
    if (c.dist.family() != Family::lomax_mix) {
      // variance needs a 4th moment for a clean band; use a generous 8-sigma-ish one
      const double var_hat = sumsq / n - mean * mean;
      EXPECT_NEAR(var_hat / c.dist.variance(), 1.0, 0.05)
          << family_name(c.dist.family());
    }
  }
}

TEST(Sample, FiniteSupportFrequencies) {
  const Distribution d =
      validate(DistributionSpec::finite_support({{-1.0, 0.3}, {2.0, 0.7}}));
  const std::uint64_t n = 1000000;
  RngStream rng(kDefaultSeed, 11);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (d.sample(rng) == 2.0) ++hits;
  }
  const double freq = static_cast<double>(hits) / n;
  EXPECT_NEAR(freq, 0.7, 4.0 * std::sqrt(0.21 / (double)n));
}

}  // namespace
