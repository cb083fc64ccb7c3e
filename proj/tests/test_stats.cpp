#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "regenlab/closed_form.hpp"
#include "regenlab/rng.hpp"
#include "regenlab/stats.hpp"

using namespace regenlab;

TEST_CASE("empirical distribution function") {
  const EmpiricalCdf cdf({4.0, 1.0, 2.0, 2.0});
  CHECK(cdf(0.5) == 0.0);
  CHECK(cdf(1.0) == doctest::Approx(0.25));
  CHECK(cdf(1.5) == doctest::Approx(0.25));
  CHECK(cdf(2.0) == doctest::Approx(0.75));
  CHECK(cdf(3.9) == doctest::Approx(0.75));
  CHECK(cdf(4.0) == 1.0);
  CHECK(cdf(100.0) == 1.0);
  CHECK(cdf.sorted() == std::vector<double>({1.0, 2.0, 2.0, 4.0}));
}

TEST_CASE("one-sample distance against a continuous reference") {
  const Cdf expo = reference_cdf(ExponentialLaw{1.0});
  // Single observation at the median: sup gap is one half on either side.
  CHECK(ks_distance({std::log(2.0)}, expo) == doctest::Approx(0.5));

  // Samples planted at exact quantile midpoints have distance 1/(2M).
  const std::size_t m = 100;
  std::vector<double> planted(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    planted[i] = -std::log1p(-p);
  }
  CHECK(ks_distance(planted, expo) == doctest::Approx(0.005).epsilon(1e-9));
}

TEST_CASE("one-sample distance stays exact on atomic references") {
  const Cdf geom = reference_cdf(GeometricFirstSuccess{0.5});
  // Perfect proportions for the first two atoms: the distance is carried
  // entirely by the missing mass beyond 2: sup at 3^- of F - F_hat.
  // F(1)=0.5, F(2)=0.75, F(3)=0.875; with samples {1,1,2,4}:
  // at 3^-: F = 0.875 wait: F(3^-) = F(2) = 0.75 vs F_hat = 0.75 -> 0;
  // at 4^-: F(3) = 0.875 vs F_hat(4^-) = 0.75 -> 0.125.
  CHECK(ks_distance({1.0, 1.0, 2.0, 4.0}, geom) == doctest::Approx(0.125));

  // Exactly matching proportions on the first two atoms only.
  CHECK(ks_distance({1.0, 2.0}, geom) == doctest::Approx(0.25));

  // A sample matching the law's proportions perfectly at {1,1,2,3} has
  // distance |F_hat(3) - F(3)| = 1 - 0.875.
  CHECK(ks_distance({1.0, 1.0, 2.0, 3.0}, geom) == doctest::Approx(0.125));
}

TEST_CASE("two-sample distance with ties handled on both sides") {
  CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(ks_two_sample({1.0, 1.0, 2.0}, {1.0, 2.0, 2.0}) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(ks_two_sample({0.0, 1.0}, {2.0, 3.0}) == doctest::Approx(1.0));
  CHECK(ks_two_sample({1.0, 2.0}, {1.5, 2.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("transform and mean estimates") {
  CHECK(empirical_laplace({0.0, std::log(2.0)}, 1.0) ==
        doctest::Approx(0.75));
  const MeanEstimate m = sample_mean({1.0, 2.0, 3.0});
  CHECK(m.mean == doctest::Approx(2.0));
  CHECK(m.std_error == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(m.count == 3);
}

TEST_CASE("log-log slope on an exact power law") {
  std::vector<double> x;
  std::vector<double> y;
  for (const double v : {1.0, 2.0, 4.0, 8.0, 32.0, 100.0}) {
    x.push_back(v);
    y.push_back(3.0 * std::pow(v, 1.7));
  }
  const SlopeFit fit = loglog_slope(x, y);
  CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.slope_std_error == doctest::Approx(0.0).epsilon(1e-10));

  CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope({1.0, 2.0, -3.0}, {1.0, 2.0, 3.0}),
                  std::invalid_argument);
}

TEST_CASE("replica runner is deterministic for any thread count") {
  const auto fn = [](RngStream& rng) {
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += rng.uniform();
    return acc;
  };
  const auto one = run_replicas(17, 1 << 20, 1000, fn, 1);
  const auto three = run_replicas(17, 1 << 20, 1000, fn, 3);
  const auto eight = run_replicas(17, 1 << 20, 1000, fn, 8);
  const auto hw = run_replicas(17, 1 << 20, 1000, fn, 0);
  CHECK(one == three);
  CHECK(one == eight);
  CHECK(one == hw);

  // Replica r sees exactly RngStream(seed, base + r).
  RngStream direct(17, (1 << 20) + 137);
  CHECK(one[137] == doctest::Approx(fn(direct)).epsilon(1e-15));

  // Disjoint stream bases give unrelated values.
  const auto other = run_replicas(17, 1 << 21, 1000, fn, 2);
  CHECK(one != other);

  CHECK(run_replicas(17, 0, 0, fn).empty());
}
