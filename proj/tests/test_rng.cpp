#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "regenlab/rng.hpp"

using namespace regenlab;

namespace {

// z-score acceptance band for a Monte Carlo proportion against its exact
// value; 4.5 sigma keeps the false-alarm rate of the whole file negligible.
void check_proportion(double hits, double trials, double p_exact) {
  const double se = std::sqrt(p_exact * (1.0 - p_exact) / trials);
  CHECK(std::abs(hits / trials - p_exact) <= 4.5 * se);
}

}  // namespace

TEST_CASE("streams are reproducible and index-separated") {
  RngStream a(7, 5);
  RngStream b(7, 5);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(7, 6);
  RngStream d(8, 5);
  RngStream e(7, 5);
  int differ_c = 0;
  int differ_d = 0;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t x = e.next_u64();
    differ_c += (c.next_u64() != x);
    differ_d += (d.next_u64() != x);
  }
  CHECK(differ_c >= 15);
  CHECK(differ_d >= 15);

  CHECK(a.master_seed() == 7);
  CHECK(a.stream_index() == 5);
}

TEST_CASE("uniform variants respect their ranges and mean") {
  RngStream rng(11, 0);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // SE of the mean of U(0,1) is 1/sqrt(12 n).
  CHECK(std::abs(sum / n - 0.5) <= 4.5 / std::sqrt(12.0 * n));

  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }

  int heads = 0;
  for (int i = 0; i < n; ++i) heads += rng.coin();
  check_proportion(heads, n, 0.5);
}

TEST_CASE("exponential sampler matches its moments and tail") {
  RngStream rng(3, 1);
  const int n = 200000;
  const double theta = 1.7;
  double sum = 0.0;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_exponential(rng, theta);
    REQUIRE(x >= 0.0);
    sum += x;
    above += (x > 1.0);
  }
  // mean 1/theta with SD 1/theta
  CHECK(std::abs(sum / n - 1.0 / theta) <= 4.5 / (theta * std::sqrt(1.0 * n)));
  check_proportion(above, n, std::exp(-theta));
}

TEST_CASE("geometric sampler counts failures before the first success") {
  RngStream rng(3, 2);
  const int n = 200000;
  const double p = 0.3;
  double sum = 0.0;
  double sum2 = 0.0;
  std::vector<int> freq(4, 0);
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(sample_geometric(rng, p));
    sum += k;
    sum2 += k * k;
    if (k < 4) ++freq[static_cast<int>(k)];
  }
  const double mean = (1.0 - p) / p;
  const double var = (1.0 - p) / (p * p);
  CHECK(std::abs(sum / n - mean) <= 4.5 * std::sqrt(var / n));
  const double var_hat = sum2 / n - (sum / n) * (sum / n);
  CHECK(var_hat == doctest::Approx(var).epsilon(0.05));
  // P(G = k) = (1-p)^k p
  for (int k = 0; k < 4; ++k)
    check_proportion(freq[k], n, std::pow(1.0 - p, k) * p);

  // p = 1 always succeeds immediately
  for (int i = 0; i < 10; ++i) CHECK(sample_geometric(rng, 1.0) == 0);
}

TEST_CASE("gamma sampler: shape 1 is exponential, general shape has the "
          "right moments") {
  RngStream rng(3, 3);
  const int n = 200000;
  double sum = 0.0;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_gamma(rng, 1.0);
    sum += x;
    above += (x > 1.0);
  }
  CHECK(std::abs(sum / n - 1.0) <= 4.5 / std::sqrt(1.0 * n));
  check_proportion(above, n, std::exp(-1.0));

  const double shape = 4.2;
  sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_gamma(rng, shape);
    sum += x;
    sum2 += x * x;
  }
  CHECK(std::abs(sum / n - shape) <= 4.5 * std::sqrt(shape / n));
  CHECK(sum2 / n - (sum / n) * (sum / n) ==
        doctest::Approx(shape).epsilon(0.05));
}

TEST_CASE("poisson sampler covers both regimes") {
  RngStream rng(3, 4);
  const int n = 200000;
  for (const double mu : {3.7, 47.5}) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(sample_poisson(rng, mu));
      sum += k;
      sum2 += k * k;
    }
    CHECK(std::abs(sum / n - mu) <= 4.5 * std::sqrt(mu / n));
    CHECK(sum2 / n - (sum / n) * (sum / n) ==
          doctest::Approx(mu).epsilon(0.05));
  }
  // Exact pmf spot check in the small regime: P(N = 0) = e^{-mu}.
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += (sample_poisson(rng, 2.0) == 0);
  check_proportion(zeros, n, std::exp(-2.0));
}

TEST_CASE("negative binomial sampler covers both regimes") {
  RngStream rng(3, 5);
  const int n = 200000;
  // r geometric summands in the direct regime, gamma-poisson beyond it.
  for (const std::uint64_t r : {std::uint64_t{3}, std::uint64_t{20}}) {
    const double p = 0.4;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k =
          static_cast<double>(sample_negative_binomial(rng, r, p));
      sum += k;
      sum2 += k * k;
    }
    const double mean = static_cast<double>(r) * (1.0 - p) / p;
    const double var = static_cast<double>(r) * (1.0 - p) / (p * p);
    CHECK(std::abs(sum / n - mean) <= 4.5 * std::sqrt(var / n));
    CHECK(sum2 / n - (sum / n) * (sum / n) ==
          doctest::Approx(var).epsilon(0.05));
  }
  // r = 0 is the empty sum.
  CHECK(sample_negative_binomial(rng, 0, 0.4) == 0);
}

TEST_CASE("heavy step law: closed-form atom, pmf and tail identities") {
  const HeavyStepLaw law(1.5);
  CHECK(law.alpha() == 1.5);
  // 1 - zeta(2.5)/2 with zeta(2.5) = 1.3414872572509171
  CHECK(law.atom() == doctest::Approx(0.3292564).epsilon(1e-6));
  CHECK(law.atom() + law.magnitude_tail(0) == doctest::Approx(1.0));
  // P(|step| = k) = (1/2) k^{-(1+alpha)}
  CHECK(law.magnitude_pmf(1) == doctest::Approx(0.5));
  CHECK(law.magnitude_pmf(2) ==
        doctest::Approx(0.5 * std::pow(2.0, -2.5)).epsilon(1e-12));
  for (const std::int64_t k : {1, 2, 3, 10, 100}) {
    CHECK(law.magnitude_tail(k - 1) - law.magnitude_tail(k) ==
          doctest::Approx(law.magnitude_pmf(k)).epsilon(1e-10));
  }
  // Direct partial sum oracle for the tail.
  double direct = 0.0;
  for (std::int64_t k = 6; k <= 4000000; ++k)
    direct += 0.5 * std::pow(static_cast<double>(k), -2.5);
  CHECK(law.magnitude_tail(5) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("heavy step sampler matches the law it reports") {
  const HeavyStepLaw law(1.5);
  RngStream rng(3, 6);
  const int n = 300000;
  int zero = 0;
  int one = 0;
  int big = 0;
  long long positive = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t s = law.sample(rng);
    if (s == 0) ++zero;
    if (s == 1 || s == -1) ++one;
    if (s > 10 || s < -10) ++big;
    if (s > 0) ++positive;
  }
  check_proportion(zero, n, law.atom());
  check_proportion(one, n, law.magnitude_pmf(1));
  check_proportion(big, n, law.magnitude_tail(10));
  // Sign symmetry among the nonzero steps.
  check_proportion(positive, n - zero, 0.5);

  // The convenience wrapper draws from the same family.
  RngStream rng2(3, 7);
  int zero2 = 0;
  for (int i = 0; i < n; ++i) zero2 += (sample_heavy_step(rng2, 1.5) == 0);
  check_proportion(zero2, n, law.atom());
}

TEST_CASE("heavy step law validates its exponent") {
  CHECK_THROWS_AS(HeavyStepLaw(1.0), std::invalid_argument);
  CHECK_THROWS_AS(HeavyStepLaw(2.0), std::invalid_argument);
}
