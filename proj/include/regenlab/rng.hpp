#pragma once

#include <cstdint>

// Splittable pseudo-random streams plus the integer/real samplers used by the
// simulators. A stream is fully determined by (master seed, stream index):
// replicated experiments hand stream index = replica id to each replica, so
// results are reproducible under any thread schedule. The generator is
// counter-based: output k is a bijective mix of (state0 + k * gamma), with a
// per-stream additive constant chosen as in the SplittableRandom family, so
// distinct streams are not shifted copies of one sequence.

namespace regenlab {

class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on [0,1), 53 bits.
  double uniform() noexcept;

  // Uniform on (0,1); always a safe log() argument.
  double uniform_open() noexcept;

  // One fair bit, served from a buffered 64-bit word.
  bool coin() noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return index_; }

private:
  std::uint64_t state_;
  std::uint64_t gamma_;
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

// Exponential(theta) variate; theta > 0.
double sample_exponential(RngStream& rng, double theta);

// Number of failures before the first success in Bernoulli(p) trials:
// P(K = k) = p (1-p)^k on {0, 1, ...}. Sampled by closed-form CDF inversion.
// p in (0, 1]; p = 1 is the point mass at 0.
std::uint64_t sample_geometric(RngStream& rng, double p);

// Gamma(shape, scale = 1) with shape >= 1 (squeeze method of Marsaglia-Tsang).
double sample_gamma(RngStream& rng, double shape);

// Poisson(mean); exact for all means (product inversion below 10, transformed
// rejection above).
std::uint64_t sample_poisson(RngStream& rng, double mean);

// Number of failures before the r-th success in Bernoulli(p) trials
// (sum of r geometric(p) draws). Exact; large r goes through the
// gamma-Poisson mixture so the cost is O(1) in r.
std::uint64_t sample_negative_binomial(RngStream& rng, std::uint64_t r, double p);

// Symmetric integer step law with a polynomial tail:
//   P(step = +k) = P(step = -k) = (1/4) k^{-(1+alpha)}   for 1 <= k <= 2^31,
//   P(step = 0)  = the complementary atom.
// alpha in (1, 2). Magnitudes are drawn exactly by rejection against the
// floor of a continuous Pareto proposal; the support truncation at 2^31
// (mass ~ 1e-14) is folded into the redraw loop. Construction computes the
// normalizing sums once, so reuse one instance inside hot loops.
class HeavyStepLaw {
public:
  explicit HeavyStepLaw(double alpha);

  std::int64_t sample(RngStream& rng) const;

  double alpha() const noexcept { return alpha_; }
  // P(step = 0).
  double atom() const noexcept { return atom_; }
  // P(|step| = k), k >= 1.
  double magnitude_pmf(std::int64_t k) const;
  // P(|step| > k), k >= 0, from the exact normalized tail sums.
  double magnitude_tail(std::int64_t k) const;

private:
  double alpha_;
  double atom_;
  double accept_scale_;  // (1 - 2^-alpha), the rejection bound at j = 1
};

// One-off draw from HeavyStepLaw(alpha); prefer a cached HeavyStepLaw when
// drawing many steps.
std::int64_t sample_heavy_step(RngStream& rng, double alpha);

}  // namespace regenlab
