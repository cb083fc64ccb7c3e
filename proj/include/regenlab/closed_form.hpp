#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Closed-form laws and numeric kernels: branching-process iterates and
// extinction laws, cutout-length and renewal densities, subordinator models
// with their two-sided Laplace identities, exact simple-random-walk return
// tails, and the reference distribution functions the statistical checks
// compare against. Everything here is deterministic and pure.

namespace regenlab {

// ---------------------------------------------------------------------------
// Numeric kernels
// ---------------------------------------------------------------------------

// ln(k!) — exact cumulative table for small k, Stirling series beyond.
double log_factorial(std::uint64_t k);

// In-repo error function (Cody-style rational approximation, |err| < 1e-14);
// keeps the reference laws independent of platform special functions.
double erf_inrepo(double x);

// Adaptive Simpson quadrature on [a, b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 48);

// Sum_{k > above} k^{-s} for s > 1 via the Euler-Maclaurin expansion
// (absolute error ~ above^{-s-5}).
double power_tail_sum(double s, double above);

// Sum_{k = 1}^{upto} k^{-s} for s > 1; exact-direct head plus tail difference.
double truncated_power_sum(double s, std::uint64_t upto);

// Exact rational with 64-bit reduced numerator/denominator. Arithmetic runs
// through 128-bit intermediates and throws std::overflow_error if a reduced
// result leaves the 64-bit range.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);  // normalizes sign, reduces

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const = default;

  double to_double() const;
};

// ---------------------------------------------------------------------------
// Branching-process closed forms
// ---------------------------------------------------------------------------

// n-fold iterate of the generating function f(s) = 1/(2 - s) of the
// geometric(1/2) offspring law: f_n(s) = (n - (n-1)s) / (n+1 - ns),
// evaluated in the rearranged form (n(1-s)+s)/(n(1-s)+1) for stability at
// large n. Requires s in [0, 1].
double gw_iterate(std::uint64_t n, double s);

// f_n(0) computed by literally iterating z <- 1/(2 - z) in exact rational
// arithmetic (n steps); equals n/(n+1).
Rational gw_iterate_exact(std::uint64_t n);

// Extinction law of the rescaled branching population with initial mass
// mesh * z: f_{floor(mesh t)}(0) raised to the real exponent mesh * z,
// i.e. (m/(m+1))^(mesh z) with m = floor(mesh t).
double gw_extinction_cdf_discrete(std::uint64_t mesh, double z, double t);

// Continuum extinction law: P(T_0 <= t | Z_0 = z) = exp(-z/t), t > 0.
double cb_extinction_cdf(double z, double t);

// ---------------------------------------------------------------------------
// Branching with immigration
// ---------------------------------------------------------------------------

// Parameters of the immigration chain: geometric(1/2) offspring plus an
// independent immigration count each generation with law
// P(I = k) = (1-p) p^k on {0, 1, ...}, mean delta = p/(1-p) in (0, 1).
struct GwiParams {
  double p;

  explicit GwiParams(double p_) : p(p_) {
    if (!(p > 0.0 && p < 0.5))
      throw std::invalid_argument("GwiParams: p must lie in (0, 1/2)");
  }
  double delta() const { return p / (1.0 - p); }
  // Success parameter of the immigration count law: P(I = k) = s (1-s)^k.
  double immigration_success() const { return 1.0 - p; }
};

// P(L <= n) where L is the extinction generation of one immigrant cluster:
// the immigration pgf composed with the n-th offspring iterate at 0, which
// closes to s(n+1)/(1 + s n) for immigration success parameter s.
double cutout_length_cdf(const GwiParams& params, std::uint64_t n);

// Same law, computed end to end in exact rational arithmetic for a rational
// success parameter: iterate the offspring pgf n times, then apply the
// immigration pgf g(z) = s / (1 - (1-s) z).
Rational cutout_length_cdf_exact(const Rational& success, std::uint64_t n);

// P(the immigration chain is at zero in generation n | Z_0 = 0):
// u(n) = prod_{m=0}^{n-1} cutout_length_cdf(m), u(0) = 1.
double gwi_renewal_density(const GwiParams& params, std::uint64_t n);

// u(0), ..., u(max_n) in one pass.
std::vector<double> gwi_renewal_density_table(const GwiParams& params,
                                              std::uint64_t max_n);

// ---------------------------------------------------------------------------
// Subordinators and two-sided Laplace identities
// ---------------------------------------------------------------------------

struct SubordinatorModel {
  std::string name;
  std::function<double(double)> laplace_exponent;
  double drift = 0.0;
  // Levy measure of (l, infinity).
  std::function<double(double)> levy_tail;

  // Phi(lambda) = lambda^rho, rho in (0, 1); tail l^-rho / Gamma(1-rho).
  static SubordinatorModel stable(double rho);
  // Inverse local time of Brownian motion at 0: Phi(lambda) = sqrt(2 lambda),
  // tail sqrt(2 / (pi l)).
  static SubordinatorModel brownian_local_time();
};

// lambda^rho for rho in (0, 1), lambda >= 0.
double stable_laplace_exponent(double rho, double lambda);

// Levy tail sqrt(2 / (pi l)) of the Brownian local-time subordinator; l > 0.
double bm_inverse_lt_tail(double l);

// E[exp(-alpha g - beta d)] for the pair (last zero before, first zero after)
// an independent exponential(theta) time, when the inverse local time is the
// given subordinator: (Phi(beta+theta) - Phi(beta)) / Phi(alpha+beta+theta).
double gd_laplace_subordinator(const SubordinatorModel& model, double theta,
                               double alpha, double beta);

// Lattice counterpart driven by the one-jump transform mgf(lambda) =
// E[exp(-lambda tau_1)]: (mgf(beta) - mgf(beta+theta)) / (1 - mgf(alpha+beta+theta)).
double gd_laplace_discrete(const std::function<double(double)>& mgf,
                           double theta, double alpha, double beta);

// ---------------------------------------------------------------------------
// Simple symmetric random walk exact laws
// ---------------------------------------------------------------------------

// P(first return to 0 > m) for m = 0..max_m, by the survivor-count dynamic
// program over path heights. Counts are dyadic rationals held in doubles:
// exact while they fit 53 bits (m <= ~55), relative error < 1e-12 up to
// m ~ 1e4 beyond that.
std::vector<double> ssrw_first_return_tails(std::uint64_t max_m);

// Single value P(first return > m).
double ssrw_first_return_tail(std::uint64_t m);

// P(walk is at 0 at step i) for i = 0..max_i (exact product recursion).
std::vector<double> ssrw_zero_probabilities(std::uint64_t max_i);

// E[exp(-lambda R / mesh)] where R is the first return time; the transform of
// one rescaled excursion length. lambda >= 0 (the value at 0 is exactly 1).
double ssrw_excursion_mgf(std::uint64_t mesh, double lambda);

// ---------------------------------------------------------------------------
// Reference distribution functions
// ---------------------------------------------------------------------------

using Cdf = std::function<double(double)>;

struct HalfNormal {};
struct GeneralizedArcsine {
  double rho;  // in (0, 1)
};
struct GeometricFirstSuccess {
  double q;  // success probability; support {1, 2, ...}
};
struct NegativeBinomialCount {
  double q;         // per-trial success probability
  std::uint64_t m;  // number of successes; support {m, m+1, ...}
};
struct ExponentialLaw {
  double theta;
};

using ReferenceFamily =
    std::variant<HalfNormal, GeneralizedArcsine, GeometricFirstSuccess,
                 NegativeBinomialCount, ExponentialLaw>;

// Right-continuous distribution function of the requested family.
Cdf reference_cdf(const ReferenceFamily& family);

// CDF of the generalized arcsine(rho) law on (0,1) with density
// sin(pi rho)/pi * x^(rho-1) (1-x)^(-rho), by adaptive quadrature on
// singularity-removing substitutions (absolute error < 1e-10).
double generalized_arcsine_cdf(double rho, double x);

}  // namespace regenlab
