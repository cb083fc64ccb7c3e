#include "regenlab/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>

namespace regenlab {
namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// log k!
// ---------------------------------------------------------------------------

constexpr std::size_t kLogFactTable = 1025;

const std::array<double, kLogFactTable>& log_fact_table() {
  static const auto table = [] {
    std::array<double, kLogFactTable> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (std::size_t k = 1; k < kLogFactTable; ++k) {
      acc += std::log(static_cast<long double>(k));
      t[k] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

// ---------------------------------------------------------------------------
// Rational helpers
// ---------------------------------------------------------------------------

using int128 = __int128;

int128 abs128(int128 v) { return v < 0 ? -v : v; }

int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

long long narrow128(int128 v) {
  if (v > static_cast<int128>(std::numeric_limits<long long>::max()) ||
      v < static_cast<int128>(std::numeric_limits<long long>::min()))
    throw std::overflow_error("Rational: reduced value exceeds 64-bit range");
  return static_cast<long long>(v);
}

Rational make_rational(int128 n, int128 d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int128 g = gcd128(n, d);
  if (g == 0) g = 1;
  Rational r;
  r.num = narrow128(n / g);
  r.den = narrow128(d / g);
  return r;
}

}  // namespace

double log_factorial(std::uint64_t k) {
  if (k < kLogFactTable) return log_fact_table()[k];
  // Stirling series; at k >= 1025 the omitted term is below 1e-28.
  const double x = static_cast<double>(k);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return x * std::log(x) - x + 0.5 * std::log(2.0 * kPi * x) +
         inv * (1.0 / 12.0 +
                inv2 * (-1.0 / 360.0 +
                        inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0))));
}

// ---------------------------------------------------------------------------
// Error function (Cody-style rational approximation)
// ---------------------------------------------------------------------------

namespace {

// erfc(y) * exp(y^2) for 0.46875 < y, central rational piece.
double erfc_scaled_mid(double y) {
  static constexpr double c[9] = {
      5.64188496988670089e-1, 8.88314979438837594e0,  6.61191906371416295e1,
      2.98635138197400131e2,  8.81952221241769090e2,  1.71204761263407058e3,
      2.05107837782607147e3,  1.23033935479799725e3,  2.15311535474403846e-8};
  static constexpr double d[8] = {
      1.57449261107098347e1, 1.17693950891312499e2, 5.37181101862009858e2,
      1.62138957456669019e3, 3.29079923573345963e3, 4.36261909014324716e3,
      3.43936767414372164e3, 1.23033935480374942e3};
  double num = c[8] * y;
  double den = y;
  for (int i = 0; i < 7; ++i) {
    num = (num + c[i]) * y;
    den = (den + d[i]) * y;
  }
  return (num + c[7]) / (den + d[7]);
}

// erfc(y) * exp(y^2) for y >= 4.
double erfc_scaled_far(double y) {
  static constexpr double p[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                  1.25781726111229246e-1, 1.60837851487422766e-2,
                                  6.58749161529837803e-4, 1.63153871373020978e-2};
  static constexpr double q[5] = {2.56852019228982242e0, 1.87295284992346047e0,
                                  5.27905102951428412e-1, 6.05183413124413191e-2,
                                  2.33520497626869185e-3};
  const double z = 1.0 / (y * y);
  double num = p[5] * z;
  double den = z;
  for (int i = 0; i < 4; ++i) {
    num = (num + p[i]) * z;
    den = (den + q[i]) * z;
  }
  const double r = z * (num + p[4]) / (den + q[4]);
  return (1.0 / std::sqrt(kPi) - r) / y;
}

// exp(-y^2) with the argument split to cut cancellation, as in CALERF.
double exp_neg_y2(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  return std::exp(-ysq * ysq) * std::exp(-(y - ysq) * (y + ysq));
}

}  // namespace

double erf_inrepo(double x) {
  const double y = std::abs(x);
  if (y <= 0.46875) {
    static constexpr double a[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                                    3.77485237685302021e2, 3.20937758913846947e3,
                                    1.85777706184603153e-1};
    static constexpr double b[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                                    1.28261652607737228e3, 2.84423683343917062e3};
    const double z = y * y;
    double num = a[4] * z;
    double den = z;
    for (int i = 0; i < 3; ++i) {
      num = (num + a[i]) * z;
      den = (den + b[i]) * z;
    }
    return x * (num + a[3]) / (den + b[3]);
  }
  double erfc;
  if (y <= 4.0) {
    erfc = exp_neg_y2(y) * erfc_scaled_mid(y);
  } else if (y < 26.5) {
    erfc = exp_neg_y2(y) * erfc_scaled_far(y);
  } else {
    erfc = 0.0;
  }
  return x > 0.0 ? 1.0 - erfc : erfc - 1.0;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// ---------------------------------------------------------------------------
// Power sums
// ---------------------------------------------------------------------------

double power_tail_sum(double s, double above) {
  if (!(s > 1.0))
    throw std::invalid_argument("power_tail_sum: s must exceed 1");
  if (!(above >= 0.0))
    throw std::invalid_argument("power_tail_sum: above must be >= 0");
  const std::uint64_t a = static_cast<std::uint64_t>(std::floor(above));
  const std::uint64_t n0 = std::max<std::uint64_t>(a, 64);
  double head = 0.0;
  for (std::uint64_t j = n0; j > a; --j)
    head += std::pow(static_cast<double>(j), -s);
  // Euler-Maclaurin for sum_{j > n0} j^-s.
  const double n = static_cast<double>(n0);
  const double ns = std::pow(n, -s);
  const double tail =
      n * ns / (s - 1.0) - 0.5 * ns + (s / 12.0) * ns / n -
      (s * (s + 1.0) * (s + 2.0) / 720.0) * ns / (n * n * n) +
      (s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0) * ns /
          (n * n * n * n * n);
  return head + tail;
}

double truncated_power_sum(double s, std::uint64_t upto) {
  if (!(s > 1.0))
    throw std::invalid_argument("truncated_power_sum: s must exceed 1");
  if (upto == 0) return 0.0;
  if (upto <= 1000000) {
    double sum = 0.0;
    for (std::uint64_t j = upto; j >= 1; --j)
      sum += std::pow(static_cast<double>(j), -s);
    return sum;
  }
  return power_tail_sum(s, 0.0) - power_tail_sum(s, static_cast<double>(upto));
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

Rational::Rational(long long n, long long d) {
  *this = make_rational(static_cast<int128>(n), static_cast<int128>(d));
}

Rational Rational::operator+(const Rational& o) const {
  return make_rational(static_cast<int128>(num) * o.den +
                           static_cast<int128>(o.num) * den,
                       static_cast<int128>(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return make_rational(static_cast<int128>(num) * o.den -
                           static_cast<int128>(o.num) * den,
                       static_cast<int128>(den) * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return make_rational(static_cast<int128>(num) * o.num,
                       static_cast<int128>(den) * o.den);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
  return make_rational(static_cast<int128>(num) * o.den,
                       static_cast<int128>(den) * o.num);
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

// ---------------------------------------------------------------------------
// Branching-process closed forms
// ---------------------------------------------------------------------------

double gw_iterate(std::uint64_t n, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("gw_iterate: s must lie in [0, 1]");
  const double nd = static_cast<double>(n);
  const double w = nd * (1.0 - s);
  return (w + s) / (w + 1.0);
}

Rational gw_iterate_exact(std::uint64_t n) {
  Rational z(0, 1);
  const Rational one(1, 1);
  const Rational two(2, 1);
  for (std::uint64_t i = 0; i < n; ++i) z = one / (two - z);
  return z;
}

double gw_extinction_cdf_discrete(std::uint64_t mesh, double z, double t) {
  if (mesh == 0)
    throw std::invalid_argument("gw_extinction_cdf_discrete: mesh must be > 0");
  if (!(z >= 0.0))
    throw std::invalid_argument("gw_extinction_cdf_discrete: z must be >= 0");
  if (z == 0.0) return 1.0;
  if (!(t > 0.0)) return 0.0;
  const std::uint64_t m =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(mesh) * t));
  if (m == 0) return 0.0;
  // f_m(0)^(mesh z) = (m/(m+1))^(mesh z), evaluated through log1p.
  return std::exp(static_cast<double>(mesh) * z *
                  std::log1p(-1.0 / (static_cast<double>(m) + 1.0)));
}

double cb_extinction_cdf(double z, double t) {
  if (!(z >= 0.0))
    throw std::invalid_argument("cb_extinction_cdf: z must be >= 0");
  if (z == 0.0) return 1.0;
  if (!(t > 0.0)) return 0.0;
  return std::exp(-z / t);
}

// ---------------------------------------------------------------------------
// Branching with immigration
// ---------------------------------------------------------------------------

double cutout_length_cdf(const GwiParams& params, std::uint64_t n) {
  const double s = params.immigration_success();
  const double nd = static_cast<double>(n);
  return s * (nd + 1.0) / (1.0 + s * nd);
}

Rational cutout_length_cdf_exact(const Rational& success, std::uint64_t n) {
  const Rational one(1, 1);
  const Rational z = gw_iterate_exact(n);
  // Immigration pgf g(z) = s / (1 - (1-s) z) evaluated at the offspring
  // iterate.
  return success / (one - (one - success) * z);
}

double gwi_renewal_density(const GwiParams& params, std::uint64_t n) {
  double u = 1.0;
  for (std::uint64_t m = 0; m < n; ++m) u *= cutout_length_cdf(params, m);
  return u;
}

std::vector<double> gwi_renewal_density_table(const GwiParams& params,
                                              std::uint64_t max_n) {
  std::vector<double> table(max_n + 1);
  table[0] = 1.0;
  double u = 1.0;
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    u *= cutout_length_cdf(params, n - 1);
    table[n] = u;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Subordinators
// ---------------------------------------------------------------------------

SubordinatorModel SubordinatorModel::stable(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("SubordinatorModel: rho must lie in (0, 1)");
  char name[32];
  std::snprintf(name, sizeof(name), "stable(%g)", rho);
  SubordinatorModel m;
  m.name = name;
  m.laplace_exponent = [rho](double lambda) {
    return stable_laplace_exponent(rho, lambda);
  };
  m.drift = 0.0;
  const double gamma_factor = 1.0 / std::tgamma(1.0 - rho);
  m.levy_tail = [rho, gamma_factor](double l) {
    if (!(l > 0.0))
      throw std::invalid_argument("levy_tail: l must be positive");
    return gamma_factor * std::pow(l, -rho);
  };
  return m;
}

SubordinatorModel SubordinatorModel::brownian_local_time() {
  SubordinatorModel m;
  m.name = "brownian-local-time";
  m.laplace_exponent = [](double lambda) { return std::sqrt(2.0 * lambda); };
  m.drift = 0.0;
  m.levy_tail = [](double l) { return bm_inverse_lt_tail(l); };
  return m;
}

double stable_laplace_exponent(double rho, double lambda) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument(
        "stable_laplace_exponent: rho must lie in (0, 1)");
  if (!(lambda >= 0.0))
    throw std::invalid_argument(
        "stable_laplace_exponent: lambda must be >= 0");
  return std::pow(lambda, rho);
}

double bm_inverse_lt_tail(double l) {
  if (!(l > 0.0))
    throw std::invalid_argument("bm_inverse_lt_tail: l must be positive");
  return std::sqrt(2.0 / (kPi * l));
}

double gd_laplace_subordinator(const SubordinatorModel& model, double theta,
                               double alpha, double beta) {
  if (!(theta > 0.0) || !(alpha >= 0.0) || !(beta >= 0.0))
    throw std::invalid_argument(
        "gd_laplace_subordinator: need theta > 0, alpha >= 0, beta >= 0");
  const double num =
      model.laplace_exponent(beta + theta) - model.laplace_exponent(beta);
  return num / model.laplace_exponent(alpha + beta + theta);
}

double gd_laplace_discrete(const std::function<double(double)>& mgf,
                           double theta, double alpha, double beta) {
  if (!(theta > 0.0) || !(alpha >= 0.0) || !(beta >= 0.0))
    throw std::invalid_argument(
        "gd_laplace_discrete: need theta > 0, alpha >= 0, beta >= 0");
  return (mgf(beta) - mgf(beta + theta)) / (1.0 - mgf(alpha + beta + theta));
}

// ---------------------------------------------------------------------------
// Simple symmetric random walk
// ---------------------------------------------------------------------------

std::vector<double> ssrw_first_return_tails(std::uint64_t max_m) {
  std::vector<double> tails(max_m + 1, 1.0);
  if (max_m < 2) return tails;
  // Survivor mass over heights after the first step, conditioned on starting
  // upward; height 0 absorbs. Entries are dyadic rationals carried in
  // doubles.
  std::vector<double> q(max_m + 2, 0.0);
  std::vector<double> next(max_m + 2, 0.0);
  q[1] = 1.0;
  for (std::uint64_t m = 2; m <= max_m; ++m) {
    const std::size_t top = static_cast<std::size_t>(m);
    double total = 0.0;
    for (std::size_t h = 1; h <= top; ++h) {
      const double from_below = (h >= 2) ? q[h - 1] : 0.0;
      const double from_above = q[h + 1];
      next[h] = 0.5 * (from_below + from_above);
      total += next[h];
    }
    std::swap(q, next);
    // Returns to the origin happen only after an even number of steps, so
    // the tail is exactly flat across each odd index; copying (rather than
    // re-summing) keeps that identity bit-exact.
    tails[m] = (m % 2 == 1) ? tails[m - 1] : total;
  }
  return tails;
}

double ssrw_first_return_tail(std::uint64_t m) {
  return ssrw_first_return_tails(m).back();
}

std::vector<double> ssrw_zero_probabilities(std::uint64_t max_i) {
  std::vector<double> u(max_i + 1, 0.0);
  u[0] = 1.0;
  double even = 1.0;
  for (std::uint64_t k = 2; k <= max_i; k += 2) {
    even *= static_cast<double>(k - 1) / static_cast<double>(k);
    u[k] = even;
  }
  return u;
}

double ssrw_excursion_mgf(std::uint64_t mesh, double lambda) {
  if (mesh == 0)
    throw std::invalid_argument("ssrw_excursion_mgf: mesh must be > 0");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("ssrw_excursion_mgf: lambda must be >= 0");
  // E[z^R] = 1 - sqrt(1 - z^2) at z = exp(-lambda/mesh).
  const double one_minus_z2 =
      -std::expm1(-2.0 * lambda / static_cast<double>(mesh));
  return 1.0 - std::sqrt(one_minus_z2);
}

// ---------------------------------------------------------------------------
// Reference distribution functions
// ---------------------------------------------------------------------------

namespace {

// Lazily extended CDF table for the trial count to the m-th success.
struct NegBinTable {
  double q;
  std::uint64_t m;
  std::vector<double> cdf;   // cdf[i] = P(T <= m + i)
  double pmf_last;           // P(T = m + (cdf.size() - 1))

  NegBinTable(double q_, std::uint64_t m_) : q(q_), m(m_) {
    pmf_last = std::pow(q, static_cast<double>(m));
    cdf.push_back(pmf_last);
  }

  void extend_to(std::uint64_t idx) {
    while (cdf.size() <= idx) {
      // t = m + cdf.size() - 1 is the trial count of the current last entry.
      const double t = static_cast<double>(m) + cdf.size() - 1.0;
      pmf_last *= (1.0 - q) * t / (t + 1.0 - static_cast<double>(m));
      cdf.push_back(cdf.back() + pmf_last);
    }
  }
};

}  // namespace

double generalized_arcsine_cdf(double rho, double x) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument(
        "generalized_arcsine_cdf: rho must lie in (0, 1)");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (rho == 0.5) return (2.0 / kPi) * std::asin(std::sqrt(x));
  const double norm = std::sin(kPi * rho) / kPi;
  if (x <= 0.5) {
    // Substitute t = v^(1/rho): the integrand becomes (1 - v^(1/rho))^(-rho),
    // bounded on the whole range.
    const double inv_rho = 1.0 / rho;
    const double integral = adaptive_simpson(
        [rho, inv_rho](double v) {
          return std::pow(1.0 - std::pow(v, inv_rho), -rho);
        },
        0.0, std::pow(x, rho), 1e-12);
    return norm * inv_rho * integral;
  }
  // Substitute 1 - t = w^(1/(1-rho)) and integrate the upper tail.
  const double om = 1.0 - rho;
  const double inv_om = 1.0 / om;
  const double integral = adaptive_simpson(
      [rho, inv_om](double w) {
        return std::pow(1.0 - std::pow(w, inv_om), rho - 1.0);
      },
      0.0, std::pow(1.0 - x, om), 1e-12);
  return 1.0 - norm * inv_om * integral;
}

Cdf reference_cdf(const ReferenceFamily& family) {
  struct Visitor {
    Cdf operator()(const HalfNormal&) const {
      return [](double x) {
        return x <= 0.0 ? 0.0 : erf_inrepo(x / std::sqrt(2.0));
      };
    }
    Cdf operator()(const GeneralizedArcsine& g) const {
      const double rho = g.rho;
      return [rho](double x) { return generalized_arcsine_cdf(rho, x); };
    }
    Cdf operator()(const GeometricFirstSuccess& g) const {
      if (!(g.q > 0.0 && g.q <= 1.0))
        throw std::invalid_argument(
            "reference_cdf: success probability must lie in (0, 1]");
      const double q = g.q;
      return [q](double x) {
        if (x < 1.0) return 0.0;
        const double k = std::floor(x);
        return -std::expm1(k * std::log1p(-q));
      };
    }
    Cdf operator()(const NegativeBinomialCount& nb) const {
      if (!(nb.q > 0.0 && nb.q <= 1.0) || nb.m == 0)
        throw std::invalid_argument(
            "reference_cdf: need success probability in (0, 1] and m >= 1");
      auto table = std::make_shared<NegBinTable>(nb.q, nb.m);
      const std::uint64_t m = nb.m;
      return [table, m](double x) {
        const double fl = std::floor(x);
        if (fl < static_cast<double>(m)) return 0.0;
        const std::uint64_t idx =
            static_cast<std::uint64_t>(fl) - m;
        table->extend_to(idx);
        return std::min(table->cdf[idx], 1.0);
      };
    }
    Cdf operator()(const ExponentialLaw& e) const {
      if (!(e.theta > 0.0))
        throw std::invalid_argument("reference_cdf: theta must be positive");
      const double theta = e.theta;
      return [theta](double x) {
        return x <= 0.0 ? 0.0 : -std::expm1(-theta * x);
      };
    }
  };
  return std::visit(Visitor{}, family);
}

}  // namespace regenlab
