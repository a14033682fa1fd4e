#include "lundberg/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lundberg/bounds.hpp"
#include "test_util.hpp"

using namespace lundberg;

namespace {

Distribution make(const DistributionSpec& s) { return validate(s); }

TEST(RunEpisode, LatticeWalkStopsExactly) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  RngStream rng(kDefaultSeed, 0);
  for (int i = 0; i < 2000; ++i) {
    const EpisodeSample ep = run_episode(d, 1.0, rng);
    EXPECT_DOUBLE_EQ(ep.overshoot, 1.0);  // drawdown hits d exactly on the lattice
    EXPECT_GE(ep.m_d, 0.0);
    EXPECT_GE(ep.tau, 1u);
  }
}

TEST(RunEpisode, ContinuousOvershootStrict) {
  const Distribution d = make(DistributionSpec::gaussian(1.0, 1.0));
  RngStream rng(kDefaultSeed, 1);
  for (int i = 0; i < 2000; ++i) {
    const EpisodeSample ep = run_episode(d, 1.0, rng);
    EXPECT_GT(ep.overshoot, 1.0);
    EXPECT_GE(ep.m_d, 0.0);
  }
}

TEST(RunEpisode, StepLimitGuard) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  RngStream rng(kDefaultSeed, 2);
  try {
    run_episode(d, 1e6, rng, 50);
    FAIL() << "expected StepLimitExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::step_limit_exceeded);
  }
}

TEST(EstimateExpectedMax, MatchesDichotomousExactMean) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const MonteCarloEstimate e = estimate_expected_max(d, 2.0, 100000, 123);
  EXPECT_NEAR(e.mean, 70.0 / 9.0, 3.0 * e.std_error);
  EXPECT_EQ(e.n, 100000u);
}

TEST(EstimateExpectedMax, GaussianInsideBoundPair) {
  const Distribution d = make(DistributionSpec::gaussian(1.0, 1.0));
  const MonteCarloEstimate e = estimate_expected_max(d, 1.0, 50000, 7);
  const ExcessConstants c = excess_constants(d, 2.0);
  const BoundPair b = expected_max_bounds(2.0, 1.0, c.d_zero);
  EXPECT_GE(e.mean, b.lower - 3.0 * e.std_error);
  EXPECT_LE(e.mean, b.upper + 3.0 * e.std_error);
}

TEST(EstimateExpectedMax, ShiftedExponentialExceedsBmLowerBound) {
  const Distribution d = make(DistributionSpec::shifted_exponential(1.0, 0.5));
  const double alpha = adjustment_coefficient(d).alpha;
  const MonteCarloEstimate e = estimate_expected_max(d, 1.0, 50000, 8);
  EXPECT_GE(e.mean, std::expm1(alpha) / alpha - 3.0 * e.std_error);
}

TEST(EstimateExpectedMax, DeterministicAcrossWorkerCounts) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const MonteCarloEstimate serial = estimate_expected_max(d, 2.0, 20001, 42, 1);
  const MonteCarloEstimate wide = estimate_expected_max(d, 2.0, 20001, 42, 4);
  EXPECT_EQ(serial.mean, wide.mean);  // bit identical
  EXPECT_EQ(serial.std_error, wide.std_error);
  const MonteCarloEstimate reseeded = estimate_expected_max(d, 2.0, 20001, 43, 2);
  EXPECT_NE(serial.mean, reseeded.mean);
}

TEST(EstimateMinTail, GaussianInsideBounds) {
  const Distribution d = make(DistributionSpec::gaussian(1.0, 1.0));
  const std::vector<double> xs = {0.5, 1.0, 2.0};
  const auto est = estimate_min_tail(d, xs, 50000, 11, 1e-6);
  const double dm = d_minus(d, 2.0).value;
  ASSERT_EQ(est.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const TailPair t = min_tail_bounds(2.0, xs[i], dm);
    EXPECT_GE(est[i].mean, t.lower - 3.0 * est[i].std_error) << xs[i];
    EXPECT_LE(est[i].mean, t.upper + 3.0 * est[i].std_error) << xs[i];
    EXPECT_NEAR(est[i].censored_fraction, 1.0 - est[i].mean, 1e-15);
  }
  // survival estimates are monotone nonincreasing in x
  EXPECT_GE(est[0].mean, est[1].mean);
  EXPECT_GE(est[1].mean, est[2].mean);
}

TEST(EstimateMinTail, TwoPointMatchesRuinOracle) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const std::vector<double> xs = {0.5, 1.0, 2.0};
  const auto est = estimate_min_tail(d, xs, 100000, 12, 1e-6);
  // -min > x on the integer lattice means min <= -floor(x)-1
  const std::vector<int> ks = {1, 2, 3};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double exact = oracle::ruin_probability(0.7, ks[i]);
    EXPECT_NEAR(est[i].mean, exact, 3.0 * est[i].std_error) << xs[i];
  }
  // the shooting oracle itself reproduces the closed form ((1-p)/p)^k
  EXPECT_NEAR(oracle::ruin_probability(0.7, 2), std::pow(3.0 / 7.0, 2.0), 1e-10);
}

TEST(EstimateMinTail, AtZeroBelowOne) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const auto est = estimate_min_tail(d, {0.0, 1.0}, 20000, 13, 1e-6);
  // P(-min > 0) = P(walk ever negative) = ruin probability for k = 1
  EXPECT_LT(est[0].mean, 1.0);
  EXPECT_NEAR(est[0].mean, oracle::ruin_probability(0.7, 1),
              3.0 * est[0].std_error);
}

TEST(MartingaleCheck, ZeroStepsExactlyOne) {
  const Distribution d = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const MonteCarloEstimate e = martingale_check(d, 0.8, 0, 1000, 1);
  EXPECT_DOUBLE_EQ(e.mean, 1.0);
  EXPECT_DOUBLE_EQ(e.std_error, 0.0);
}

TEST(MartingaleCheck, MeanOneWithinBand) {
  const Distribution tp = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const double a_tp = adjustment_coefficient(tp).alpha;
  const MonteCarloEstimate e1 = martingale_check(tp, a_tp, 10, 200000, 21);
  EXPECT_NEAR(e1.mean, 1.0, 4.0 * e1.std_error);

  const Distribution g = make(DistributionSpec::gaussian(1.0, 1.0));
  const MonteCarloEstimate e2 = martingale_check(g, 2.0, 5, 200000, 22);
  EXPECT_NEAR(e2.mean, 1.0, 4.0 * e2.std_error);
}

TEST(MartingaleCheck, OverflowGuardFires) {
  const Distribution d = make(DistributionSpec::gaussian(1.0, 1.0));
  try {
    martingale_check(d, 2.0, 1000000, 100, 1);
    FAIL() << "expected OverflowGuard";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::overflow_guard);
  }
}

TEST(StoppedMartingale, OptionalStoppingIdentity) {
  const Distribution tp = make(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const MonteCarloEstimate e1 = stopped_martingale_check(tp, 1.0, 200000, 31);
  EXPECT_NEAR(e1.mean, 1.0, 4.0 * e1.std_error);

  const Distribution g = make(DistributionSpec::gaussian(1.0, 1.0));
  const MonteCarloEstimate e2 = stopped_martingale_check(g, 1.0, 200000, 32);
  EXPECT_NEAR(e2.mean, 1.0, 4.0 * e2.std_error);
}

// Exact geometric decomposition for the lattice walk at d = 1:
// E[exp(-alpha S_tau)] = exp(alpha) E[(q/p)^M] with M geometric(p).
TEST(StoppedMartingale, LatticeGeometricOracle) {
  const double p = 0.7;
  const double alpha = std::log(p / (1.0 - p));
  double expected = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double pm = std::pow(p, k) * (1.0 - p);
    expected += pm * std::exp(-alpha * (k - 1.0));
  }
  EXPECT_NEAR(expected, 1.0, 1e-12);  // the identity itself
  const Distribution tp = make(DistributionSpec::two_point(-1.0, 1.0, p));
  const MonteCarloEstimate e = stopped_martingale_check(tp, 1.0, 100000, 33);
  EXPECT_NEAR(e.mean, expected, 4.0 * e.std_error);
}

// Stochastic upper bound: quantiles of M_d do not exceed those of the
// exponential law with mean (exp(alpha(d+d0))-1)/alpha.
TEST(Quantiles, StochasticUpperBound) {
  struct Case {
    Distribution dist;
    double d;
    std::uint64_t stream;
  };
  const std::vector<Case> cases = {
      {make(DistributionSpec::two_point(-1.0, 1.0, 0.7)), 1.0, 41},
      {make(DistributionSpec::gaussian(1.0, 1.0)), 1.0, 42},
  };
  for (const Case& c : cases) {
    const double alpha = adjustment_coefficient(c.dist).alpha;
    const ExcessConstants ec = excess_constants(c.dist, alpha);
    const double mean_exp = std::expm1(alpha * (c.d + ec.d_zero)) / alpha;
    std::vector<double> ms;
    RngStream rng(kDefaultSeed, c.stream);
    for (int i = 0; i < 20000; ++i) {
      ms.push_back(run_episode(c.dist, c.d, rng).m_d);
    }
    std::sort(ms.begin(), ms.end());
    for (double q : {0.5, 0.9, 0.99}) {
      const double emp = ms[static_cast<std::size_t>(q * (ms.size() - 1))];
      const double theo = -mean_exp * std::log1p(-q);
      EXPECT_LE(emp, theo) << family_name(c.dist.family()) << " q=" << q;
    }
  }
}

}  // namespace
