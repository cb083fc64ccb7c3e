#include "regenlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "regenlab/closed_form.hpp"
#include "regenlab/cutout.hpp"
#include "regenlab/local_time.hpp"
#include "regenlab/processes.hpp"
#include "regenlab/rng.hpp"
#include "regenlab/stats.hpp"
#include "regenlab/version.hpp"

namespace regenlab {
namespace {

using nlohmann::ordered_json;

// Each experiment owns a block of 16 stream families; replica r of phase ph
// draws from stream (index * 16 + ph) << 32 | r, so no two phases anywhere
// share a stream.
std::uint64_t stream_base(std::uint64_t experiment_index, std::uint64_t phase) {
  return (experiment_index * 16 + phase) << 32;
}

ordered_json make_row(ordered_json n, ordered_json estimate,
                      ordered_json reference, ordered_json ks,
                      ordered_json ci_low, ordered_json ci_high, bool pass) {
  ordered_json row;
  row["n"] = std::move(n);
  row["estimate"] = std::move(estimate);
  row["reference"] = std::move(reference);
  row["ks"] = std::move(ks);
  row["ci_low"] = std::move(ci_low);
  row["ci_high"] = std::move(ci_high);
  row["pass"] = pass;
  return row;
}

// Binomial check row: the estimated probability against its exact value,
// passing when the z-score stays within z_tol sigmas.
ordered_json proportion_row(ordered_json n, double p_hat, double p_exact,
                            std::size_t count, double z_tol) {
  const double se =
      std::sqrt(p_exact * (1.0 - p_exact) / static_cast<double>(count));
  const bool pass = std::abs(p_hat - p_exact) <= z_tol * se;
  return make_row(std::move(n), p_hat, p_exact, nullptr, p_hat - z_tol * se,
                  p_hat + z_tol * se, pass);
}

struct ExperimentBody {
  ordered_json grid = ordered_json::array();
  bool pass = true;
  std::vector<std::pair<std::string, std::vector<double>>> samples;
};

void add_row(ExperimentBody& body, ordered_json row) {
  body.pass = body.pass && row["pass"].get<bool>();
  body.grid.push_back(std::move(row));
}

// ---------------------------------------------------------------------------
// gw-extinction: closed-form battery for the branching iterates plus the
// empirical extinction probabilities of the simulated chain.
// ---------------------------------------------------------------------------

ExperimentBody run_gw_extinction(const ordered_json& P, std::uint64_t seed,
                                 std::uint64_t index) {
  ExperimentBody body;
  const double tol = P.at("battery_tol").get<double>();

  // Iterates against the exact rational recursion.
  {
    double max_err = 0.0;
    for (std::uint64_t n : {1u, 2u, 3u, 10u, 100u, 1000u, 4096u}) {
      const double exact = gw_iterate_exact(n).to_double();
      max_err = std::max(max_err, std::abs(gw_iterate(n, 0.0) - exact));
    }
    add_row(body, make_row(4096, max_err, 0.0, nullptr, nullptr, nullptr,
                           max_err <= tol));
  }

  // Semigroup property of the iterates: the (7+11)-th iterate equals the
  // 7th applied after the 11th.
  {
    double max_err = 0.0;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0})
      max_err = std::max(
          max_err, std::abs(gw_iterate(18, s) - gw_iterate(7, gw_iterate(11, s))));
    add_row(body, make_row(18, max_err, 0.0, nullptr, nullptr, nullptr,
                           max_err <= tol));
  }

  // The mesh-100 extinction value at (z, t) = (1, 1).
  {
    const double est = gw_extinction_cdf_discrete(100, 1.0, 1.0);
    const double ref = 0.3697112;
    const double ex_tol = P.at("extinction_example_tol").get<double>();
    add_row(body, make_row(100, est, ref, nullptr, nullptr, nullptr,
                           std::abs(est - ref) <= ex_tol));
  }

  // Large-mesh extinction against the continuum law exp(-z/t).
  {
    const double est = gw_extinction_cdf_discrete(4096, 1.0, 1.0);
    const double ref = cb_extinction_cdf(1.0, 1.0);
    const double c_tol = P.at("continuum_tol").get<double>();
    add_row(body, make_row(4096, est, ref, nullptr, nullptr, nullptr,
                           std::abs(est - ref) <= c_tol));
  }

  // Exact rational identity for the clan-lifetime distribution function:
  // the iterated-pgf form, the closed ratio s(m+1)/(1+sm), and the summand
  // form 1 - (1-s)/(1+sm) must agree exactly for every m up to the bound.
  {
    const std::uint64_t max_m = P.at("identity_max_m").get<std::uint64_t>();
    std::uint64_t mismatches = 0;
    const Rational one(1, 1);
    const Rational two(2, 1);
    for (const Rational& success : {Rational(1, 4), Rational(1, 3)}) {
      Rational z(0, 1);  // offspring iterate at 0, advanced incrementally
      for (std::uint64_t m = 0; m <= max_m; ++m) {
        const Rational via_pgf = success / (one - (one - success) * z);
        const Rational rm(static_cast<long long>(m), 1);
        const Rational closed = success * (rm + one) / (one + success * rm);
        const Rational summand = one - (one - success) / (one + success * rm);
        if (!(via_pgf == closed) || !(via_pgf == summand)) ++mismatches;
        z = one / (two - z);
      }
    }
    for (std::uint64_t m : {0u, 1u, 2u, 10u, 100u}) {
      const Rational direct = cutout_length_cdf_exact(Rational(1, 3), m);
      const Rational rm(static_cast<long long>(m), 1);
      const Rational closed =
          Rational(1, 3) * (rm + one) / (one + Rational(1, 3) * rm);
      if (!(direct == closed)) ++mismatches;
    }
    add_row(body, make_row(static_cast<std::int64_t>(max_m),
                           static_cast<double>(mismatches), 0.0, nullptr,
                           nullptr, nullptr, mismatches == 0));
  }

  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  if (replicas > 0) {
    const double sigma = P.at("sigma").get<double>();
    const std::uint64_t z_small = P.at("z_small").get<std::uint64_t>();
    const std::uint64_t gens_small = P.at("gens_small").get<std::uint64_t>();
    const std::uint64_t z_large = P.at("z_large").get<std::uint64_t>();
    const std::uint64_t gens_large = P.at("gens_large").get<std::uint64_t>();

    const auto extinct_fn = [](std::uint64_t z0, std::uint64_t gens) {
      return [z0, gens](RngStream& rng) {
        return simulate_gw(rng, z0, gens).back() == 0 ? 1.0 : 0.0;
      };
    };
    const std::vector<double> small = run_replicas(
        seed, stream_base(index, 1), replicas, extinct_fn(z_small, gens_small));
    const std::vector<double> large = run_replicas(
        seed, stream_base(index, 2), replicas, extinct_fn(z_large, gens_large));

    const double ref_small = std::exp(static_cast<double>(z_small) *
                                      std::log(gw_iterate(gens_small, 0.0)));
    const double ref_large = std::exp(static_cast<double>(z_large) *
                                      std::log(gw_iterate(gens_large, 0.0)));
    add_row(body, proportion_row(static_cast<std::int64_t>(gens_small),
                                 sample_mean(small).mean, ref_small, replicas,
                                 sigma));
    add_row(body, proportion_row(static_cast<std::int64_t>(gens_large),
                                 sample_mean(large).mean, ref_large, replicas,
                                 sigma));
    body.samples.emplace_back("extinct_large", large);
    body.samples.emplace_back("extinct_small", small);
  }
  return body;
}

// ---------------------------------------------------------------------------
// reflected-ssrw-localtime: the rescaled zero count of the reflected walk
// against the half-normal law, across a mesh grid.
// ---------------------------------------------------------------------------

ExperimentBody run_reflected_localtime(const ordered_json& P,
                                       std::uint64_t seed,
                                       std::uint64_t index) {
  ExperimentBody body;
  const std::vector<std::uint64_t> grid =
      P.at("grid").get<std::vector<std::uint64_t>>();
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const double ks_tol = P.at("ks_tol").get<double>();
  const double slack = P.at("monotone_slack").get<double>();
  if (grid.empty()) throw std::invalid_argument("grid must be nonempty");

  const std::vector<double> tails =
      ssrw_first_return_tails(*std::max_element(grid.begin(), grid.end()));
  const Cdf half_normal = reference_cdf(HalfNormal{});
  const double mean_ref = std::sqrt(2.0 / 3.14159265358979323846);

  double prev_ks = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = grid[i];
    const double a_n = scaling_constant(bm_inverse_lt_tail(1.0), tails[n]);
    const std::vector<double> values = run_replicas(
        seed, stream_base(index, 1 + i), replicas, [n, a_n](RngStream& rng) {
          const auto path = simulate_perturbed_reflected_walk(rng, 0.5, n);
          const LocalTimeProfile profile = local_time_profile(path, n);
          return static_cast<double>(profile.counts.back()) / a_n;
        });
    const double ks = ks_distance(values, half_normal);
    const MeanEstimate mean = sample_mean(values);
    const bool last = (i + 1 == grid.size());
    bool pass = true;
    if (i > 0) pass = ks <= prev_ks + slack;
    if (last) pass = pass && ks <= ks_tol;
    add_row(body, make_row(static_cast<std::int64_t>(n), mean.mean, mean_ref,
                           ks, mean.mean - 3.0 * mean.std_error,
                           mean.mean + 3.0 * mean.std_error, pass));
    body.samples.emplace_back("localtime_n" + std::to_string(n), values);
    prev_ks = ks;
  }
  std::rotate(body.samples.begin(), body.samples.end() - 1,
              body.samples.end());  // largest mesh first
  return body;
}

// ---------------------------------------------------------------------------
// reflected-ssrw-arcsine: the last zero before time 1 against the arcsine
// law.
// ---------------------------------------------------------------------------

ExperimentBody run_reflected_arcsine(const ordered_json& P, std::uint64_t seed,
                                     std::uint64_t index) {
  ExperimentBody body;
  const std::uint64_t n = P.at("n").get<std::uint64_t>();
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const double ks_tol = P.at("ks_tol").get<double>();

  const std::vector<double> values = run_replicas(
      seed, stream_base(index, 1), replicas, [n](RngStream& rng) {
        const auto path = simulate_perturbed_reflected_walk(rng, 0.5, n);
        return excursion_endpoints(path, n, 1.0).g;
      });
  const double ks = ks_distance(values, reference_cdf(GeneralizedArcsine{0.5}));
  const MeanEstimate mean = sample_mean(values);
  add_row(body, make_row(static_cast<std::int64_t>(n), mean.mean, 0.5, ks,
                         mean.mean - 3.0 * mean.std_error,
                         mean.mean + 3.0 * mean.std_error, ks <= ks_tol));
  body.samples.emplace_back("last_zero", values);
  return body;
}

// ---------------------------------------------------------------------------
// vague-convergence: the scaled excursion-length tail against the continuum
// excursion-measure tail on a grid of durations.
// ---------------------------------------------------------------------------

ExperimentBody run_vague_convergence(const ordered_json& P, std::uint64_t seed,
                                     std::uint64_t index) {
  ExperimentBody body;
  const std::uint64_t n = P.at("n").get<std::uint64_t>();
  const std::size_t excursions = P.at("excursions").get<std::size_t>();
  const std::uint64_t cap = P.at("cap").get<std::uint64_t>();
  const std::vector<double> x_grid = P.at("x_grid").get<std::vector<double>>();
  const double rel_tol = P.at("rel_tol").get<double>();

  const std::vector<double> drawn = run_replicas(
      seed, stream_base(index, 1), excursions, [cap](RngStream& rng) {
        return static_cast<double>(
            sample_first_return(rng, SimpleSymmetricStep{}, cap).steps);
      });
  std::vector<std::uint64_t> lengths(drawn.size());
  for (std::size_t i = 0; i < drawn.size(); ++i)
    lengths[i] = static_cast<std::uint64_t>(drawn[i]);

  const double a_n =
      scaling_constant(bm_inverse_lt_tail(1.0), ssrw_first_return_tail(n));
  for (double x : x_grid) {
    const std::uint64_t threshold =
        static_cast<std::uint64_t>(x * static_cast<double>(n));
    if (threshold >= cap)
      throw std::invalid_argument("vague-convergence: x n must stay below cap");
    const TailEstimate tail = empirical_tail(lengths, threshold);
    const double est = a_n * tail.value;
    const double ref = bm_inverse_lt_tail(x);
    const bool pass = std::abs(est / ref - 1.0) <= rel_tol;
    add_row(body, make_row(x, est, ref, nullptr,
                           a_n * (tail.value - 3.0 * tail.std_error),
                           a_n * (tail.value + 3.0 * tail.std_error), pass));
  }
  body.samples.emplace_back("first_return_steps", drawn);
  return body;
}

// ---------------------------------------------------------------------------
// stable-walk-scaling: growth exponent of the scaling constants of the
// heavy-tailed walk, and mesh-stability of the rescaled zero count.
// ---------------------------------------------------------------------------

ExperimentBody run_stable_walk_scaling(const ordered_json& P,
                                       std::uint64_t seed,
                                       std::uint64_t index) {
  ExperimentBody body;
  const double alpha = P.at("alpha").get<double>();
  const std::size_t pool = P.at("pool").get<std::size_t>();
  const std::uint64_t pool_cap = P.at("pool_cap").get<std::uint64_t>();
  const std::vector<std::uint64_t> grid =
      P.at("grid").get<std::vector<std::uint64_t>>();
  const double slope_tol = P.at("slope_tol").get<double>();
  const std::vector<std::uint64_t> ks_pair =
      P.at("ks_pair").get<std::vector<std::uint64_t>>();
  const std::size_t ks_replicas = P.at("ks_replicas").get<std::size_t>();
  const double ks_tol = P.at("ks_tol").get<double>();
  if (ks_pair.size() != 2)
    throw std::invalid_argument("ks_pair must list two mesh sizes");

  const double rho = 1.0 - 1.0 / alpha;
  const SubordinatorModel model = SubordinatorModel::stable(rho);
  const StepSampler sampler{StepLaw{HeavyTailStep{alpha}}};

  const std::vector<double> drawn = run_replicas(
      seed, stream_base(index, 1), pool, [&sampler, pool_cap](RngStream& rng) {
        return static_cast<double>(
            sample_first_return(rng, sampler, pool_cap).steps);
      });
  std::vector<std::uint64_t> lengths(drawn.size());
  for (std::size_t i = 0; i < drawn.size(); ++i)
    lengths[i] = static_cast<std::uint64_t>(drawn[i]);

  std::vector<double> mesh_values;
  std::vector<double> a_values;
  double prev_a = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t n = grid[i];
    if (n >= pool_cap)
      throw std::invalid_argument("stable-walk-scaling: grid exceeds cap");
    const TailEstimate a_n =
        scaling_constant(model.levy_tail(1.0), empirical_tail(lengths, n));
    mesh_values.push_back(static_cast<double>(n));
    a_values.push_back(a_n.value);
    const bool pass = (i == 0) || a_n.value >= prev_a;
    add_row(body, make_row(static_cast<std::int64_t>(n), a_n.value, nullptr,
                           nullptr, a_n.value - 3.0 * a_n.std_error,
                           a_n.value + 3.0 * a_n.std_error, pass));
    prev_a = a_n.value;
  }

  const SlopeFit fit = loglog_slope(mesh_values, a_values);
  add_row(body, make_row("slope", fit.slope, rho, nullptr,
                         fit.slope - 3.0 * fit.slope_std_error,
                         fit.slope + 3.0 * fit.slope_std_error,
                         std::abs(fit.slope - rho) <= slope_tol));

  // Rescaled zero counts at two meshes should share one law in the limit.
  std::vector<std::vector<double>> scaled(2);
  for (std::size_t k = 0; k < 2; ++k) {
    const std::uint64_t n = ks_pair[k];
    const double a_n =
        scaling_constant(model.levy_tail(1.0), empirical_tail(lengths, n))
            .value;
    scaled[k] = run_replicas(
        seed, stream_base(index, 2 + k), ks_replicas,
        [&sampler, n, a_n](RngStream& rng) {
          std::uint64_t zeros = 1;  // the walk starts at zero
          std::int64_t x = 0;
          for (std::uint64_t j = 0; j < n; ++j) {
            x += sampler(rng);
            if (x == 0) ++zeros;
          }
          return static_cast<double>(zeros) / a_n;
        });
  }
  const double ks = ks_two_sample(scaled[0], scaled[1]);
  add_row(body, make_row(static_cast<std::int64_t>(ks_pair[1]), ks, nullptr,
                         ks, nullptr, nullptr, ks <= ks_tol));
  body.samples.emplace_back("localtime_fine_mesh", scaled[1]);
  body.samples.emplace_back("localtime_coarse_mesh", scaled[0]);
  body.samples.emplace_back("first_return_steps", drawn);
  return body;
}

// ---------------------------------------------------------------------------
// gwi-renewal: the zero-occupation probabilities of the immigration chain
// against the exact product formula, and the decay exponent of that formula.
// ---------------------------------------------------------------------------

ExperimentBody run_gwi_renewal(const ordered_json& P, std::uint64_t seed,
                               std::uint64_t index) {
  ExperimentBody body;
  const GwiParams params(P.at("p").get<double>());
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const std::uint64_t horizon = P.at("horizon").get<std::uint64_t>();
  const double z_tol = P.at("z_tol").get<double>();

  std::vector<std::uint64_t> zero_counts(horizon + 1, 0);
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream rng(seed, stream_base(index, 1) + r);
    const auto z = simulate_gwi_timechange(rng, params, horizon);
    for (std::uint64_t m = 0; m <= horizon; ++m)
      if (z[m] == 0) ++zero_counts[m];
  }
  const std::vector<double> u = gwi_renewal_density_table(params, horizon);

  double max_abs_z = 0.0;
  for (std::uint64_t m = 1; m <= horizon; ++m) {
    const double p_hat =
        static_cast<double>(zero_counts[m]) / static_cast<double>(replicas);
    const double se =
        std::sqrt(u[m] * (1.0 - u[m]) / static_cast<double>(replicas));
    max_abs_z = std::max(max_abs_z, std::abs(p_hat - u[m]) / se);
  }
  for (std::uint64_t m : P.at("marginal_ms").get<std::vector<std::uint64_t>>())
    add_row(body,
            proportion_row(static_cast<std::int64_t>(m),
                           static_cast<double>(zero_counts[m]) /
                               static_cast<double>(replicas),
                           u[m], replicas, z_tol));
  add_row(body, make_row("max_z", max_abs_z, 0.0, nullptr, nullptr, nullptr,
                         max_abs_z <= z_tol));

  // Decay of the exact formula itself on a log grid of generations.
  const std::uint64_t lo = P.at("slope_lo").get<std::uint64_t>();
  const std::uint64_t hi = P.at("slope_hi").get<std::uint64_t>();
  const double slope_ref = P.at("slope_ref").get<double>();
  const double slope_tol = P.at("slope_tol").get<double>();
  const std::vector<double> table = gwi_renewal_density_table(params, hi);
  std::vector<double> ns;
  std::vector<double> us;
  const int points = 41;
  for (int k = 0; k < points; ++k) {
    const double n = static_cast<double>(lo) *
                     std::pow(static_cast<double>(hi) / static_cast<double>(lo),
                              static_cast<double>(k) / (points - 1));
    const std::uint64_t ni = static_cast<std::uint64_t>(std::llround(n));
    if (!ns.empty() && static_cast<double>(ni) == ns.back()) continue;
    ns.push_back(static_cast<double>(ni));
    us.push_back(table[ni]);
  }
  const SlopeFit fit = loglog_slope(ns, us);
  add_row(body, make_row("slope", fit.slope, slope_ref, nullptr,
                         fit.slope - 3.0 * fit.slope_std_error,
                         fit.slope + 3.0 * fit.slope_std_error,
                         std::abs(fit.slope - slope_ref) <= slope_tol));
  return body;
}

// ---------------------------------------------------------------------------
// gwi-glaw: transforms of the last zero of the immigration chain before an
// exponential time, against the subordinator identity, plus the arcsine law
// of the last zero before fixed time 1.
// ---------------------------------------------------------------------------

ExperimentBody run_gwi_glaw(const ordered_json& P, std::uint64_t seed,
                            std::uint64_t index) {
  ExperimentBody body;
  const GwiParams params(P.at("p").get<double>());
  const std::uint64_t n = P.at("n").get<std::uint64_t>();
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const double theta = P.at("theta").get<double>();
  const double sigma = P.at("sigma").get<double>();
  const double slack = P.at("laplace_slack").get<double>();
  const double ks_tol = P.at("ks_tol").get<double>();

  const double rho = 1.0 - params.delta();
  std::vector<double> g_exp(replicas);
  std::vector<double> g_one(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream rng(seed, stream_base(index, 1) + r);
    const double t_exp = sample_exponential(rng, theta);
    const std::uint64_t k_exp = static_cast<std::uint64_t>(
        std::floor(static_cast<double>(n) * t_exp));
    const std::uint64_t horizon = std::max(k_exp, n);
    const auto z = simulate_gwi_timechange(rng, params, horizon);
    std::uint64_t last_exp = 0;
    std::uint64_t last_one = 0;
    for (std::uint64_t m = 0; m <= horizon; ++m) {
      if (z[m] != 0) continue;
      if (m <= k_exp) last_exp = m;
      if (m <= n) last_one = m;
    }
    g_exp[r] = static_cast<double>(last_exp) / static_cast<double>(n);
    g_one[r] = static_cast<double>(last_one) / static_cast<double>(n);
  }

  std::vector<double> transformed(replicas);
  for (std::size_t r = 0; r < replicas; ++r)
    transformed[r] = std::exp(-g_exp[r]);
  const MeanEstimate est = sample_mean(transformed);
  const double ref = gd_laplace_subordinator(SubordinatorModel::stable(rho),
                                             theta, 1.0, 0.0);
  add_row(body,
          make_row(static_cast<std::int64_t>(n), est.mean, ref, nullptr,
                   est.mean - sigma * est.std_error,
                   est.mean + sigma * est.std_error,
                   std::abs(est.mean - ref) <= sigma * est.std_error + slack));

  const double ks = ks_distance(g_one, reference_cdf(GeneralizedArcsine{rho}));
  add_row(body, make_row(static_cast<std::int64_t>(n), sample_mean(g_one).mean,
                         rho, ks, nullptr, nullptr, ks <= ks_tol));
  body.samples.emplace_back("last_zero_exp_time", g_exp);
  body.samples.emplace_back("last_zero_time_one", g_one);
  return body;
}

// ---------------------------------------------------------------------------
// negbin-check: the count of excursions up to the m-th long one against the
// negative binomial law, and the conditional mix of short excursions.
// ---------------------------------------------------------------------------

ExperimentBody run_negbin_check(const ordered_json& P, std::uint64_t seed,
                                std::uint64_t index) {
  ExperimentBody body;
  const std::uint64_t n = P.at("n").get<std::uint64_t>();
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const std::uint64_t m_max = P.at("m_max").get<std::uint64_t>();
  const double ks_tol = P.at("ks_tol").get<double>();
  const double pmf_tol = P.at("pmf_tol").get<double>();
  const double chi2_bound = P.at("chi2_bound").get<double>();
  const std::uint64_t medium = P.at("medium_threshold").get<std::uint64_t>();
  if (m_max == 0 || medium >= n)
    throw std::invalid_argument("negbin-check: bad thresholds");

  const std::vector<double> tails = ssrw_first_return_tails(n);
  const double q = tails[n];
  const double r_medium = (tails[medium] - tails[n]) / (1.0 - tails[n]);

  std::vector<std::vector<double>> t_counts(m_max,
                                            std::vector<double>(replicas));
  std::uint64_t small_total = 0;
  std::uint64_t medium_total = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream rng(seed, stream_base(index, 1) + r);
    std::uint64_t bigs = 0;
    std::uint64_t excursions = 0;
    while (bigs < m_max) {
      // One excursion, abandoned as soon as it outlasts n steps.
      const FirstReturn ret = sample_first_return(rng, SimpleSymmetricStep{}, n);
      ++excursions;
      if (!ret.complete) {
        t_counts[bigs][r] = static_cast<double>(excursions);
        ++bigs;
      } else {
        ++small_total;
        if (ret.steps > medium) ++medium_total;
      }
    }
  }

  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const double ks = ks_distance(
        t_counts[m - 1], reference_cdf(NegativeBinomialCount{q, m}));
    add_row(body, make_row(static_cast<std::int64_t>(m),
                           sample_mean(t_counts[m - 1]).mean,
                           static_cast<double>(m) / q, ks, nullptr, nullptr,
                           ks <= ks_tol));
  }

  // Cell-by-cell mass of the first count against the geometric law.
  {
    std::map<std::uint64_t, std::uint64_t> freq;
    std::uint64_t max_k = 1;
    for (double v : t_counts[0]) {
      const std::uint64_t k = static_cast<std::uint64_t>(v);
      ++freq[k];
      max_k = std::max(max_k, k);
    }
    double sup = 0.0;
    for (std::uint64_t k = 1; k <= max_k + 64; ++k) {
      const auto it = freq.find(k);
      const double p_hat =
          it == freq.end() ? 0.0
                           : static_cast<double>(it->second) /
                                 static_cast<double>(replicas);
      const double p = q * std::pow(1.0 - q, static_cast<double>(k - 1));
      sup = std::max(sup, std::abs(p_hat - p));
    }
    add_row(body, make_row(1, sup, 0.0, nullptr, nullptr, nullptr,
                           sup <= pmf_tol));
  }

  // Short excursions split between medium and tiny with the exact
  // conditional probability; one pooled z-squared against the chi-square
  // bound.
  {
    const double ns = static_cast<double>(small_total);
    const double z =
        (static_cast<double>(medium_total) - r_medium * ns) /
        std::sqrt(ns * r_medium * (1.0 - r_medium));
    add_row(body, make_row(static_cast<std::int64_t>(medium), z * z,
                           chi2_bound, nullptr, nullptr, nullptr,
                           z * z <= chi2_bound));
  }
  body.samples.emplace_back("count_to_first_long", t_counts[0]);
  return body;
}

// ---------------------------------------------------------------------------
// laplace-gd: the joint transform of the zeros straddling an exponential
// time, against the exact lattice identity and its continuum counterpart.
// ---------------------------------------------------------------------------

ExperimentBody run_laplace_gd(const ordered_json& P, std::uint64_t seed,
                              std::uint64_t index) {
  ExperimentBody body;
  const std::uint64_t n = P.at("n").get<std::uint64_t>();
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const double theta = P.at("theta").get<double>();
  const double alpha = P.at("alpha").get<double>();
  const double beta = P.at("beta").get<double>();
  const std::uint64_t step_cap = P.at("step_cap").get<std::uint64_t>();
  const double sigma = P.at("sigma").get<double>();
  const double continuum_tol = P.at("continuum_tol").get<double>();

  const std::vector<double> values = run_replicas(
      seed, stream_base(index, 1), replicas,
      [n, theta, alpha, beta, step_cap](RngStream& rng) {
        const double t = sample_exponential(rng, theta);
        const std::uint64_t k_t = static_cast<std::uint64_t>(
            std::floor(static_cast<double>(n) * t));
        // Walk the renewal sequence of zeros past k_t. A budget overrun
        // means the gap after k_t is at least (step_cap - k_t) steps, whose
        // transform weight underflows to an exact zero.
        std::uint64_t z = 0;
        for (;;) {
          const std::uint64_t budget = step_cap - z;
          const FirstReturn ret =
              sample_first_return(rng, SimpleSymmetricStep{}, budget);
          if (!ret.complete) return 0.0;
          if (z + ret.steps > k_t) {
            const double g = static_cast<double>(z) / static_cast<double>(n);
            const double d = static_cast<double>(z + ret.steps) /
                             static_cast<double>(n);
            return std::exp(-alpha * g - beta * d);
          }
          z += ret.steps;
        }
      });
  const MeanEstimate est = sample_mean(values);
  const auto mgf = [n](double lambda) {
    return ssrw_excursion_mgf(n, lambda);
  };
  const double lattice = gd_laplace_discrete(mgf, theta, alpha, beta);
  add_row(body, make_row(static_cast<std::int64_t>(n), est.mean, lattice,
                         nullptr, est.mean - sigma * est.std_error,
                         est.mean + sigma * est.std_error,
                         std::abs(est.mean - lattice) <=
                             sigma * est.std_error));

  const double continuum = gd_laplace_subordinator(
      SubordinatorModel::brownian_local_time(), theta, alpha, beta);
  add_row(body, make_row(static_cast<std::int64_t>(n), lattice, continuum,
                         nullptr, nullptr, nullptr,
                         std::abs(lattice - continuum) <= continuum_tol));
  body.samples.emplace_back("transform_values", values);
  return body;
}

// ---------------------------------------------------------------------------
// cutout-coverage: residual-set marginals against the exact renewal
// density, agreement with the immigration-chain zero set, and agreement of
// the two lifetime samplers.
// ---------------------------------------------------------------------------

ExperimentBody run_cutout_coverage(const ordered_json& P, std::uint64_t seed,
                                   std::uint64_t index) {
  ExperimentBody body;
  const GwiParams params(P.at("p").get<double>());
  const std::size_t marginal_replicas =
      P.at("marginal_replicas").get<std::size_t>();
  const std::vector<std::uint64_t> marginal_js =
      P.at("marginal_js").get<std::vector<std::uint64_t>>();
  const double z_tol = P.at("z_tol").get<double>();
  const std::size_t equiv_replicas = P.at("equiv_replicas").get<std::size_t>();
  const std::uint64_t horizon = P.at("equiv_horizon").get<std::uint64_t>();
  const double equiv_z_tol = P.at("equiv_z_tol").get<double>();
  const std::size_t lengths_replicas =
      P.at("lengths_replicas").get<std::size_t>();
  const std::uint64_t cap = P.at("lengths_cap").get<std::uint64_t>();
  const double ks_tol = P.at("ks_tol").get<double>();

  const std::uint64_t max_j =
      *std::max_element(marginal_js.begin(), marginal_js.end());
  const std::vector<double> u =
      gwi_renewal_density_table(params, std::max(max_j, horizon));

  // Residual-site marginals of the cutout against the exact product.
  const std::vector<double> density =
      empirical_renewal_density(seed, stream_base(index, 1), params,
                                CutoutMethod::kInvert, max_j,
                                marginal_replicas);
  for (std::uint64_t j : marginal_js)
    add_row(body, proportion_row(static_cast<std::int64_t>(j), density[j],
                                 u[j], marginal_replicas, z_tol));

  // The residual set and the chain's zero set carry the same marginals.
  {
    std::vector<std::uint64_t> chain_zero(horizon + 1, 0);
    for (std::size_t r = 0; r < equiv_replicas; ++r) {
      RngStream rng(seed, stream_base(index, 2) + r);
      const auto z = simulate_gwi_timechange(rng, params, horizon);
      for (std::uint64_t m = 0; m <= horizon; ++m)
        if (z[m] == 0) ++chain_zero[m];
    }
    std::vector<std::uint64_t> residual(horizon + 1, 0);
    for (std::size_t r = 0; r < equiv_replicas; ++r) {
      RngStream rng(seed, stream_base(index, 3) + r);
      const CutoutSample sample =
          sample_cutout(rng, params, CutoutMethod::kInvert,
                        static_cast<std::size_t>(horizon) + 1, cap);
      const auto mask = uncovered_mask(sample.lengths);
      for (std::uint64_t m = 0; m <= horizon; ++m) residual[m] += mask[m];
    }
    double max_abs_z = 0.0;
    const double m_count = static_cast<double>(equiv_replicas);
    for (std::uint64_t m = 1; m <= horizon; ++m) {
      const double p1 = static_cast<double>(chain_zero[m]) / m_count;
      const double p2 = static_cast<double>(residual[m]) / m_count;
      const double pooled = 0.5 * (p1 + p2);
      const double se =
          std::sqrt(pooled * (1.0 - pooled) * 2.0 / m_count);
      if (se > 0.0) max_abs_z = std::max(max_abs_z, std::abs(p1 - p2) / se);
    }
    add_row(body, make_row("max_z", max_abs_z, 0.0, nullptr, nullptr, nullptr,
                           max_abs_z <= equiv_z_tol));
  }

  // The clan simulator and the closed-form inverter draw the same law.
  {
    std::vector<double> by_sim(lengths_replicas);
    std::vector<double> by_inv(lengths_replicas);
    for (std::size_t r = 0; r < lengths_replicas; ++r) {
      RngStream rng(seed, stream_base(index, 4) + r);
      by_sim[r] = static_cast<double>(
          sample_cutout_length(rng, params, CutoutMethod::kSimulate, cap));
    }
    for (std::size_t r = 0; r < lengths_replicas; ++r) {
      RngStream rng(seed, stream_base(index, 5) + r);
      by_inv[r] = static_cast<double>(
          sample_cutout_length(rng, params, CutoutMethod::kInvert, cap));
    }
    const double ks = ks_two_sample(by_sim, by_inv);
    add_row(body, make_row("lifetimes", sample_mean(by_sim).mean,
                           sample_mean(by_inv).mean, ks, nullptr, nullptr,
                           ks <= ks_tol));
    body.samples.emplace_back("lifetimes_simulated", by_sim);
    body.samples.emplace_back("lifetimes_inverted", by_inv);
  }
  return body;
}

// ---------------------------------------------------------------------------
// negative-control: a throttled return probability must be caught by the
// arcsine comparison.
// ---------------------------------------------------------------------------

ExperimentBody run_negative_control(const ordered_json& P, std::uint64_t seed,
                                    std::uint64_t index) {
  ExperimentBody body;
  const std::uint64_t n = P.at("n").get<std::uint64_t>();
  const double p = P.at("perturb_p").get<double>();
  const std::size_t replicas = P.at("replicas").get<std::size_t>();
  const double ks_tol = P.at("ks_tol").get<double>();

  const std::vector<double> values = run_replicas(
      seed, stream_base(index, 1), replicas, [n, p](RngStream& rng) {
        const auto path = simulate_perturbed_reflected_walk(rng, p, n);
        return excursion_endpoints(path, n, 1.0).g;
      });
  const double ks = ks_distance(values, reference_cdf(GeneralizedArcsine{0.5}));
  add_row(body, make_row(static_cast<std::int64_t>(n),
                         sample_mean(values).mean, 0.5, ks, nullptr, nullptr,
                         ks <= ks_tol));
  std::size_t stuck = 0;
  for (double g : values)
    if (g == 0.0) ++stuck;
  const double p_stuck =
      static_cast<double>(stuck) / static_cast<double>(replicas);
  add_row(body, make_row(static_cast<std::int64_t>(n), p_stuck, 0.0, nullptr,
                         nullptr, nullptr, p_stuck <= 0.05));
  body.samples.emplace_back("last_zero", values);
  return body;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using Runner = ExperimentBody (*)(const ordered_json&, std::uint64_t,
                                  std::uint64_t);

struct Entry {
  ExperimentDescriptor descriptor;
  Runner runner;
};

std::vector<Entry> build_registry() {
  std::vector<Entry> registry;
  const auto add = [&registry](std::string name, std::string summary,
                               ordered_json defaults, Runner runner) {
    registry.push_back(
        {{std::move(name), std::move(summary), std::move(defaults)}, runner});
  };

  add("gw-extinction",
      "branching extinction: exact iterates, lifetime identity, simulated "
      "extinction probabilities",
      ordered_json{{"replicas", 20000},
                   {"battery_tol", 1e-12},
                   {"extinction_example_tol", 1e-6},
                   {"continuum_tol", 1e-4},
                   {"identity_max_m", 10000},
                   {"z_small", 10},
                   {"gens_small", 30},
                   {"z_large", 100},
                   {"gens_large", 100},
                   {"sigma", 3.0}},
      run_gw_extinction);

  add("reflected-ssrw-localtime",
      "rescaled zero count of the reflected walk against the half-normal "
      "law across meshes",
      ordered_json{{"grid", {256, 1024, 4096}},
                   {"replicas", 50000},
                   {"ks_tol", 0.05},
                   {"monotone_slack", 0.01}},
      run_reflected_localtime);

  add("reflected-ssrw-arcsine",
      "last zero of the reflected walk before time 1 against the arcsine "
      "law",
      ordered_json{{"n", 4096}, {"replicas", 50000}, {"ks_tol", 0.05}},
      run_reflected_arcsine);

  add("vague-convergence",
      "scaled excursion-length tails against the continuum excursion "
      "measure",
      ordered_json{{"n", 4096},
                   {"excursions", 200000},
                   {"cap", 1000000},
                   {"x_grid", {0.5, 1.0, 2.0}},
                   {"rel_tol", 0.10}},
      run_vague_convergence);

  add("stable-walk-scaling",
      "scaling constants of the heavy-tailed walk: growth exponent and "
      "mesh stability",
      ordered_json{{"alpha", 1.5},
                   {"pool", 300000},
                   {"pool_cap", 524288},
                   {"grid", {256, 512, 1024, 2048, 4096, 8192, 16384}},
                   {"slope_tol", 0.08},
                   {"ks_pair", {8192, 16384}},
                   {"ks_replicas", 20000},
                   {"ks_tol", 0.04}},
      run_stable_walk_scaling);

  add("gwi-renewal",
      "zero-occupation probabilities of the immigration chain against the "
      "exact product formula",
      ordered_json{{"p", 1.0 / 3.0},
                   {"replicas", 100000},
                   {"horizon", 50},
                   {"marginal_ms", {1, 2, 5, 10, 20, 50}},
                   // Band for the max z-score over all `horizon` marginals
                   // jointly: union bound at family error ~3e-4 for 50
                   // binomial comparisons.
                   {"z_tol", 4.5},
                   {"slope_lo", 1000},
                   {"slope_hi", 100000},
                   {"slope_ref", -0.5},
                   {"slope_tol", 0.05}},
      run_gwi_renewal);

  add("gwi-glaw",
      "last zero of the immigration chain before an exponential time: "
      "transform identity and arcsine law",
      ordered_json{{"p", 1.0 / 3.0},
                   {"n", 4096},
                   {"replicas", 50000},
                   {"theta", 1.0},
                   {"sigma", 3.0},
                   {"laplace_slack", 0.02},
                   {"ks_tol", 0.06}},
      run_gwi_glaw);

  add("negbin-check",
      "count of excursions up to the m-th long one against the negative "
      "binomial law",
      ordered_json{{"n", 64},
                   {"replicas", 100000},
                   {"m_max", 3},
                   {"ks_tol", 0.01},
                   {"pmf_tol", 0.01},
                   {"chi2_bound", 10.8276},
                   {"medium_threshold", 32}},
      run_negbin_check);

  add("laplace-gd",
      "joint transform of the zeros straddling an exponential time against "
      "the lattice identity",
      ordered_json{{"n", 64},
                   {"replicas", 100000},
                   {"theta", 1.0},
                   {"alpha", 1.0},
                   {"beta", 1.0},
                   {"step_cap", 1000000},
                   {"sigma", 3.0},
                   {"continuum_tol", 0.02}},
      run_laplace_gd);

  add("cutout-coverage",
      "residual set of the random cutout: renewal marginals, zero-set "
      "agreement, sampler agreement",
      ordered_json{{"p", 1.0 / 3.0},
                   {"marginal_replicas", 100000},
                   {"marginal_js", {1, 2, 5, 10, 20, 50}},
                   {"z_tol", 3.0},
                   {"equiv_replicas", 20000},
                   {"equiv_horizon", 50},
                   // Same simultaneous-band calibration as the immigration
                   // chain's z_tol: max over equiv_horizon comparisons.
                   {"equiv_z_tol", 4.5},
                   {"lengths_replicas", 100000},
                   {"lengths_cap", 1048576},
                   {"ks_tol", 0.01}},
      run_cutout_coverage);

  add("negative-control",
      "deliberately throttled returns; the arcsine comparison must reject",
      ordered_json{{"n", 1024},
                   {"perturb_p", 1.0 / 1024.0},
                   {"replicas", 20000},
                   {"ks_tol", 0.05}},
      run_negative_control);

  return registry;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> reg = build_registry();
  return reg;
}

}  // namespace

const std::vector<ExperimentDescriptor>& experiment_manifest() {
  static const std::vector<ExperimentDescriptor> manifest = [] {
    std::vector<ExperimentDescriptor> out;
    for (const Entry& e : registry()) out.push_back(e.descriptor);
    return out;
  }();
  return manifest;
}

const ExperimentDescriptor& find_experiment(const std::string& name) {
  for (const Entry& e : registry())
    if (e.descriptor.name == name) return e.descriptor;
  throw std::invalid_argument("unknown experiment: " + name);
}

ExperimentResult run_experiment(const std::string& name,
                                const ordered_json& overrides,
                                std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Entry>& reg = registry();
  std::size_t index = reg.size();
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (reg[i].descriptor.name == name) index = i;
  if (index == reg.size())
    throw std::invalid_argument("unknown experiment: " + name);
  const Entry& entry = reg[index];

  ordered_json params = entry.descriptor.default_params;
  for (const auto& [key, value] : overrides.items()) {
    if (!params.contains(key))
      throw std::invalid_argument("unknown parameter '" + key +
                                  "' for experiment " + name);
    params[key] = value;
  }

  const ExperimentBody body = entry.runner(params, seed, index);

  const auto elapsed = std::chrono::steady_clock::now() - start;
  ExperimentResult result;
  result.pass = body.pass;
  result.samples = body.samples;
  ordered_json& report = result.report;
  report["experiment"] = name;
  report["params"] = params;
  report["seed"] = seed;
  report["grid"] = body.grid;
  report["verdict"] = body.pass ? "PASS" : "FAIL";
  report["runtime_ms"] = static_cast<std::int64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
  report["version"] = std::string(kVersion) + "+manifest." +
                      std::to_string(kParamManifestVersion);
  return result;
}

std::string samples_to_csv(const std::vector<double>& values) {
  std::string out = "replica_id,value\n";
  char line[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.17g\n", i, values[i]);
    out += line;
  }
  return out;
}

}  // namespace regenlab
