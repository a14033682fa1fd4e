// Prints the drawdown-bound sandwich for a growing d, next to a Monte Carlo
// estimate, for one of the built-in laws.

#include <cstdio>

#include "lundberg/lundberg.hpp"

int main() {
  using namespace lundberg;
  const Distribution dist = validate(DistributionSpec::two_point(-1.0, 1.0, 0.7));
  const double alpha = adjustment_coefficient(dist).alpha;

  std::printf("two_point(+-1, p=0.7), alpha = %.6f\n", alpha);
  std::printf("%6s %12s %12s %12s %12s\n", "d", "lower", "exact", "estimate",
              "upper");
  for (double d : {1.0, 2.0, 3.0, 4.0}) {
    const ExcessConstants ec = excess_constants(dist, alpha, d);
    const BoundPair b = expected_max_bounds(alpha, d, ec.d_zero);
    const double exact = dichotomous_expected_max(0.7, d);
    const MonteCarloEstimate mc = estimate_expected_max(dist, d, 20000);
    std::printf("%6.1f %12.4f %12.4f %12.4f %12.4f\n", d, b.lower, exact,
                mc.mean, b.upper);
  }
  return 0;
}
