#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "regenlab/closed_form.hpp"
#include "regenlab/processes.hpp"
#include "regenlab/rng.hpp"
#include "regenlab/stats.hpp"

using namespace regenlab;

namespace {

void check_proportion(double hits, double trials, double p_exact) {
  const double se = std::sqrt(p_exact * (1.0 - p_exact) / trials);
  CHECK(std::abs(hits / trials - p_exact) <= 4.5 * se);
}

}  // namespace

TEST_CASE("lattice walk: shape, start, increments, reproducibility") {
  RngStream rng(5, 0);
  const auto walk = simulate_lattice_walk(rng, StepLaw{SimpleSymmetricStep{}},
                                          100);
  REQUIRE(walk.size() == 101);
  CHECK(walk[0] == 0);
  for (std::size_t i = 1; i < walk.size(); ++i)
    CHECK(std::abs(walk[i] - walk[i - 1]) == 1);

  RngStream rng2(5, 0);
  const auto walk2 = simulate_lattice_walk(rng2,
                                           StepLaw{SimpleSymmetricStep{}}, 100);
  CHECK(walk == walk2);

  // Heavy steps may be zero or large, and reuse the law's sampler.
  RngStream rng3(5, 1);
  const auto heavy =
      simulate_lattice_walk(rng3, StepLaw{HeavyTailStep{1.5}}, 2000);
  REQUIRE(heavy.size() == 2001);
  CHECK(heavy[0] == 0);
  int zero_steps = 0;
  for (std::size_t i = 1; i < heavy.size(); ++i)
    zero_steps += (heavy[i] == heavy[i - 1]);
  check_proportion(zero_steps, 2000, HeavyStepLaw(1.5).atom());
}

TEST_CASE("scaled path evaluates at rescaled times") {
  ScaledLatticePath path = scale_walk({0, 1, 2, 1}, 3, 2.0);
  CHECK(path.steps() == 3);
  CHECK(path.value_at(0.0) == 0.0);
  CHECK(path.value_at(1.0 / 3.0) == 0.5);
  CHECK(path.value_at(0.99) == 1.0);   // floor(2.97) = 2 -> value 2 / 2
  CHECK(path.value_at(1.0) == 0.5);    // final entry
  CHECK(path.value_at(7.0) == 0.5);    // clamped beyond the end
}

TEST_CASE("reflection at the running minimum") {
  const std::vector<std::int64_t> walk = {0, 1, 0, -1, -2, -1};
  const auto reflected = reflect_at_minimum(walk);
  CHECK(reflected == std::vector<std::int64_t>({0, 1, 0, 0, 0, 1}));
  for (const std::int64_t v : reflected) CHECK(v >= 0);
  // A nonnegative path is left untouched.
  const std::vector<std::int64_t> nonneg = {0, 1, 2, 1, 0, 1};
  CHECK(reflect_at_minimum(nonneg) == nonneg);
}

TEST_CASE("perturbed reflected walk: structure and transition frequencies") {
  RngStream rng(5, 2);
  const double p = 0.3;
  std::uint64_t at1 = 0;
  std::uint64_t drop = 0;
  std::uint64_t high = 0;
  std::int64_t high_drift = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const auto path = simulate_perturbed_reflected_walk(rng, p, 400);
    REQUIRE(path.size() == 401);
    CHECK(path[0] == 0);
    for (std::size_t i = 1; i < path.size(); ++i) {
      const std::int64_t prev = path[i - 1];
      const std::int64_t cur = path[i];
      REQUIRE(cur >= 0);
      if (prev == 0) {
        REQUIRE(cur == 1);  // zero always steps to one
      } else if (prev == 1) {
        REQUIRE((cur == 0 || cur == 2));
        ++at1;
        drop += (cur == 0);
      } else {
        REQUIRE(std::abs(cur - prev) == 1);
        ++high;
        high_drift += (cur - prev);
      }
    }
  }
  check_proportion(static_cast<double>(drop), static_cast<double>(at1), p);
  // Fair steps above height one: drift within 4.5 sigma of zero.
  CHECK(std::abs(static_cast<double>(high_drift)) <=
        4.5 * std::sqrt(static_cast<double>(high)));
}

TEST_CASE("perturbed walk at one half is the reflected fair walk") {
  // Compare the zero-count laws by a two-sample distance over many paths.
  const std::size_t reps = 20000;
  const std::uint64_t n = 64;
  std::vector<double> zeros_perturbed(reps);
  std::vector<double> zeros_reflected(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng_a(5, 100 + r);
    const auto a = simulate_perturbed_reflected_walk(rng_a, 0.5, n);
    std::uint64_t ca = 0;
    for (const auto v : a) ca += (v == 0);
    zeros_perturbed[r] = static_cast<double>(ca);

    RngStream rng_b(6, 100 + r);
    auto b = simulate_lattice_walk(rng_b, StepLaw{SimpleSymmetricStep{}}, n);
    std::uint64_t cb = 0;
    for (auto& v : b) cb += (v == 0);  // |S| and S share their zero set
    zeros_reflected[r] = static_cast<double>(cb);
  }
  CHECK(ks_two_sample(zeros_perturbed, zeros_reflected) < 0.025);
}

TEST_CASE("branching chain: extinction probabilities and criticality") {
  RngStream rng(5, 3);
  // Started from zero it stays at zero.
  const auto dead = simulate_gw(rng, 0, 10);
  for (const auto z : dead) CHECK(z == 0);

  const std::size_t reps = 20000;
  // P(Z_4 = 0 | Z_0 = 1) = 4/5 for the geometric(1/2) offspring law.
  std::uint64_t extinct = 0;
  double z1_sum = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream s(5, 1000 + r);
    const auto z = simulate_gw(s, 1, 4);
    REQUIRE(z.size() == 5);
    CHECK(z[0] == 1);
    extinct += (z[4] == 0);
    z1_sum += static_cast<double>(z[1]);
  }
  check_proportion(static_cast<double>(extinct), static_cast<double>(reps),
                   0.8);
  // Critical mean offspring: E Z_1 = 1, Var Z_1 = 2.
  CHECK(std::abs(z1_sum / static_cast<double>(reps) - 1.0) <=
        4.5 * std::sqrt(2.0 / static_cast<double>(reps)));
}

TEST_CASE("immigration chain: both simulators agree with the zero law") {
  const GwiParams params(1.0 / 3.0);
  const std::size_t reps = 20000;
  std::uint64_t zero1_direct = 0;
  std::uint64_t zero2_direct = 0;
  std::uint64_t zero1_tc = 0;
  std::uint64_t zero2_tc = 0;
  std::vector<double> z10_direct(reps);
  std::vector<double> z10_tc(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream sd(5, 2000000 + r);
    const auto zd = simulate_gwi_direct(sd, params, 10);
    REQUIRE(zd.size() == 11);
    CHECK(zd[0] == 0);
    zero1_direct += (zd[1] == 0);
    zero2_direct += (zd[2] == 0);
    z10_direct[r] = static_cast<double>(zd[10]);

    RngStream st(5, 3000000 + r);
    const auto zt = simulate_gwi_timechange(st, params, 10);
    REQUIRE(zt.size() == 11);
    CHECK(zt[0] == 0);
    zero1_tc += (zt[1] == 0);
    zero2_tc += (zt[2] == 0);
    z10_tc[r] = static_cast<double>(zt[10]);
  }
  const double n = static_cast<double>(reps);
  // P(Z_1 = 0) = P(no immigrants) = 2/3; P(Z_2 = 0) = 8/15.
  check_proportion(static_cast<double>(zero1_direct), n, 2.0 / 3.0);
  check_proportion(static_cast<double>(zero1_tc), n, 2.0 / 3.0);
  check_proportion(static_cast<double>(zero2_direct), n, 8.0 / 15.0);
  check_proportion(static_cast<double>(zero2_tc), n, 8.0 / 15.0);
  // E Z_t = delta t at criticality (empty start).
  const double mean_direct = sample_mean(z10_direct).mean;
  const double mean_tc = sample_mean(z10_tc).mean;
  CHECK(mean_direct == doctest::Approx(5.0).epsilon(0.05));
  CHECK(mean_tc == doctest::Approx(5.0).epsilon(0.05));
  // Full-distribution agreement of the two samplers at generation 10.
  CHECK(ks_two_sample(z10_direct, z10_tc) < 0.02);
}

TEST_CASE("first return sampler: exact mass at small values and capping") {
  const std::size_t reps = 40000;
  std::uint64_t hit2 = 0;
  std::uint64_t hit4 = 0;
  std::uint64_t hit6 = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(5, 4000000 + r);
    const FirstReturn ret =
        sample_first_return(rng, StepLaw{SimpleSymmetricStep{}}, 1000000);
    if (ret.complete) {
      hit2 += (ret.steps == 2);
      hit4 += (ret.steps == 4);
      hit6 += (ret.steps == 6);
      CHECK(ret.steps % 2 == 0);
    }
  }
  const double n = static_cast<double>(reps);
  check_proportion(static_cast<double>(hit2), n, 0.5);
  check_proportion(static_cast<double>(hit4), n, 0.125);
  check_proportion(static_cast<double>(hit6), n, 0.0625);

  // Capped draws report exactly the cap and the censoring flag; the
  // censoring frequency is the exact tail P(R > cap).
  std::uint64_t censored = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(5, 5000000 + r);
    const FirstReturn ret =
        sample_first_return(rng, StepLaw{SimpleSymmetricStep{}}, 4);
    CHECK(ret.steps <= 4);
    if (!ret.complete) {
      CHECK(ret.steps == 4);
      ++censored;
    }
  }
  check_proportion(static_cast<double>(censored), n, 0.375);

  // The StepSampler overload consumes the stream identically.
  RngStream a(9, 7);
  RngStream b(9, 7);
  const StepSampler sampler{StepLaw{SimpleSymmetricStep{}}};
  const FirstReturn ra =
      sample_first_return(a, StepLaw{SimpleSymmetricStep{}}, 100);
  const FirstReturn rb = sample_first_return(b, sampler, 100);
  CHECK(ra.steps == rb.steps);
  CHECK(ra.complete == rb.complete);
}

TEST_CASE("heavy-tailed first return has the subordinator tail exponent") {
  // P(R > n) ~ c n^{-1/3} for alpha = 3/2: check the empirical tail ratio
  // between two thresholds against 2^{-1/3}, loosely.
  const std::size_t reps = 30000;
  const StepSampler sampler{StepLaw{HeavyTailStep{1.5}}};
  std::uint64_t above_256 = 0;
  std::uint64_t above_512 = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(5, 6000000 + r);
    const FirstReturn ret = sample_first_return(rng, sampler, 8192);
    const std::uint64_t value = ret.complete ? ret.steps : 8192;
    above_256 += (value > 256);
    above_512 += (value > 512);
  }
  const double ratio =
      static_cast<double>(above_512) / static_cast<double>(above_256);
  CHECK(ratio == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(0.06));
}
