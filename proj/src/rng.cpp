#include "regenlab/rng.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "regenlab/closed_form.hpp"

namespace regenlab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// 64-bit finalizer (SplitMix64 variant 13).
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-stream increment: odd, with enough bit alternation (the gamma
// conditioning step of the SplittableRandom family).
inline std::uint64_t mix_gamma(std::uint64_t z) noexcept {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  z = (z ^ (z >> 33)) | 1ULL;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
  return z;
}

constexpr double kTwoPow53Inv = 0x1.0p-53;
constexpr double kTwoPi = 6.283185307179586477;
constexpr std::int64_t kMaxMagnitude = std::int64_t{1} << 31;

}  // namespace

RngStream::RngStream(std::uint64_t master_seed,
                     std::uint64_t stream_index) noexcept
    : seed_(master_seed), index_(stream_index) {
  const std::uint64_t h1 = mix64(master_seed + kGolden);
  const std::uint64_t h2 = mix64(h1 + stream_index);
  state_ = mix64(h2 + kGolden);
  gamma_ = mix_gamma(h2);
}

std::uint64_t RngStream::next_u64() noexcept {
  state_ += gamma_;
  return mix64(state_);
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double RngStream::uniform_open() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPow53Inv;
}

bool RngStream::coin() noexcept {
  if (bits_left_ == 0) {
    bit_buffer_ = next_u64();
    bits_left_ = 64;
  }
  const bool b = (bit_buffer_ & 1ULL) != 0;
  bit_buffer_ >>= 1;
  --bits_left_;
  return b;
}

double sample_exponential(RngStream& rng, double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("sample_exponential: theta must be positive");
  return -std::log(rng.uniform_open()) / theta;
}

std::uint64_t sample_geometric(RngStream& rng, double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_geometric: p must lie in (0, 1]");
  if (p == 1.0) return 0;
  // K = floor(ln U / ln(1-p)) satisfies P(K >= k) = (1-p)^k.
  const double k = std::floor(std::log(rng.uniform_open()) / std::log1p(-p));
  return static_cast<std::uint64_t>(k);
}

double sample_gamma(RngStream& rng, double shape) {
  if (!(shape >= 1.0))
    throw std::invalid_argument("sample_gamma: shape must be >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    // One standard normal (Box-Muller, cosine branch).
    const double z = std::sqrt(-2.0 * std::log(rng.uniform_open())) *
                     std::cos(kTwoPi * rng.uniform());
    const double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform_open();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t sample_poisson(RngStream& rng, double mean) {
  if (!(mean >= 0.0))
    throw std::invalid_argument("sample_poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Product-of-uniforms inversion.
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = rng.uniform_open();
    while (prod > limit) {
      prod *= rng.uniform_open();
      ++k;
    }
    return k;
  }
  // Transformed rejection with squeeze (PTRS).
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform_open();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const std::uint64_t k = static_cast<std::uint64_t>(kf);
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_mean - mean - log_factorial(k))
      return k;
  }
}

std::uint64_t sample_negative_binomial(RngStream& rng, std::uint64_t r,
                                       double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument(
        "sample_negative_binomial: p must lie in (0, 1]");
  if (r == 0 || p == 1.0) return 0;
  if (r < 8) {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < r; ++i) total += sample_geometric(rng, p);
    return total;
  }
  // Gamma-Poisson mixture: Poisson(Gamma(r) * (1-p)/p) is exactly the
  // failure count before the r-th success.
  const double lam = sample_gamma(rng, static_cast<double>(r)) * (1.0 - p) / p;
  return sample_poisson(rng, lam);
}

HeavyStepLaw::HeavyStepLaw(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("HeavyStepLaw: alpha must lie in (1, 2)");
  const double z = truncated_power_sum(
      1.0 + alpha, static_cast<std::uint64_t>(kMaxMagnitude));
  atom_ = 1.0 - 0.5 * z;  // two signed tails of mass z/4 each
  accept_scale_ = 1.0 - std::pow(2.0, -alpha);
}

std::int64_t HeavyStepLaw::sample(RngStream& rng) const {
  if (rng.uniform() < atom_) return 0;
  // Magnitude: floor of a continuous Pareto(alpha) proposal, thinned to the
  // exact k^-(1+alpha) weights. The accept ratio accept_scale_ / f(j) with
  // f(j) = j (1 - (j/(j+1))^alpha) is largest at j = 1 where it equals 1,
  // because f increases toward alpha.
  for (;;) {
    const double x = std::pow(rng.uniform_open(), -1.0 / alpha_);
    if (!(x < static_cast<double>(kMaxMagnitude) + 1.0)) continue;
    const double j = std::floor(x);
    const double f = j * (1.0 - std::pow(j / (j + 1.0), alpha_));
    if (rng.uniform() * f < accept_scale_) {
      const std::int64_t k = static_cast<std::int64_t>(j);
      return rng.coin() ? k : -k;
    }
  }
}

double HeavyStepLaw::magnitude_pmf(std::int64_t k) const {
  if (k < 1 || k > kMaxMagnitude) return 0.0;
  return 0.5 * std::pow(static_cast<double>(k), -(1.0 + alpha_));
}

double HeavyStepLaw::magnitude_tail(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("magnitude_tail: k must be >= 0");
  if (k >= kMaxMagnitude) return 0.0;
  const double from_k = power_tail_sum(1.0 + alpha_, static_cast<double>(k));
  const double beyond =
      power_tail_sum(1.0 + alpha_, static_cast<double>(kMaxMagnitude));
  return 0.5 * (from_k - beyond);
}

std::int64_t sample_heavy_step(RngStream& rng, double alpha) {
  return HeavyStepLaw(alpha).sample(rng);
}

}  // namespace regenlab
