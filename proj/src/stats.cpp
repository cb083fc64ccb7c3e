#include "regenlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace regenlab {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty())
    throw std::invalid_argument("EmpiricalCdf: no samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double ks_distance(const std::vector<double>& samples, const Cdf& reference) {
  if (samples.empty())
    throw std::invalid_argument("ks_distance: no samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Just below the i-th point the empirical CDF is i/n and the reference
    // is its left limit there; at the point the empirical CDF jumps to
    // (i+1)/n against the reference value. Taking the left limit (instead
    // of F itself) on the lower side keeps the statistic exact when the
    // reference has atoms at the sample points.
    const double f_at = reference(sorted[i]);
    const double f_below =
        reference(std::nextafter(sorted[i],
                                 -std::numeric_limits<double>::infinity()));
    sup = std::max(sup, f_below - static_cast<double>(i) / n);
    sup = std::max(sup, static_cast<double>(i + 1) / n - f_at);
  }
  return sup;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < a.size() || j < b.size()) {
    const double v = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i]
                                                                       : b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
  }
  return sup;
}

double empirical_laplace(const std::vector<double>& samples, double lambda) {
  if (samples.empty())
    throw std::invalid_argument("empirical_laplace: no samples");
  double sum = 0.0;
  for (double x : samples) sum += std::exp(-lambda * x);
  return sum / static_cast<double>(samples.size());
}

MeanEstimate sample_mean(const std::vector<double>& samples) {
  if (samples.empty())
    throw std::invalid_argument("sample_mean: no samples");
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  MeanEstimate est;
  est.mean = mean;
  est.std_error = samples.size() > 1 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
  est.count = samples.size();
  return est;
}

SlopeFit loglog_slope(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument(
        "loglog_slope: need matching vectors with at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("loglog_slope: entries must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("loglog_slope: x values are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    rss += r * r;
  }
  fit.slope_std_error =
      n > 2 ? std::sqrt(rss / (static_cast<double>(n - 2) * sxx)) : 0.0;
  return fit;
}

std::vector<double> run_replicas(
    std::uint64_t seed, std::uint64_t stream_base, std::size_t replicas,
    const std::function<double(RngStream&)>& replica_fn, unsigned threads) {
  std::vector<double> out(replicas);
  if (replicas == 0) return out;
  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, replicas));
  if (workers == 1) {
    for (std::size_t r = 0; r < replicas; ++r) {
      RngStream rng(seed, stream_base + r);
      out[r] = replica_fn(rng);
    }
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t r = w; r < replicas; r += workers) {
        RngStream rng(seed, stream_base + r);
        out[r] = replica_fn(rng);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return out;
}

}  // namespace regenlab
