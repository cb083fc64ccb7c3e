#include "regenlab/cutout.hpp"

#include <cmath>
#include <stdexcept>

namespace regenlab {
namespace {

std::uint64_t sample_by_simulation(RngStream& rng, const GwiParams& params,
                                   std::uint64_t cap) {
  const double s = params.immigration_success();
  // One immigrant batch and its descendant clan, generation by generation.
  std::uint64_t population = sample_geometric(rng, s);
  std::uint64_t lifetime = 0;
  while (population > 0 && lifetime < cap) {
    population = sample_negative_binomial(rng, population, 0.5);
    ++lifetime;
  }
  return lifetime;
}

std::uint64_t sample_by_inversion(RngStream& rng, const GwiParams& params,
                                  std::uint64_t cap) {
  const double s = params.immigration_success();
  const double u = rng.uniform();
  if (u <= s) return 0;
  // Smallest n with s(n+1)/(1+sn) >= u, i.e. n >= (u-s) / (s(1-u)).
  const double n = std::ceil((u - s) / (s * (1.0 - u)));
  if (!(n < static_cast<double>(cap))) return cap;
  return static_cast<std::uint64_t>(n);
}

}  // namespace

std::uint64_t sample_cutout_length(RngStream& rng, const GwiParams& params,
                                   CutoutMethod method, std::uint64_t cap) {
  if (cap == 0)
    throw std::invalid_argument("sample_cutout_length: cap must be > 0");
  switch (method) {
    case CutoutMethod::kSimulate:
      return sample_by_simulation(rng, params, cap);
    case CutoutMethod::kInvert:
      return sample_by_inversion(rng, params, cap);
  }
  throw std::invalid_argument("sample_cutout_length: unknown method");
}

CutoutSample sample_cutout(RngStream& rng, const GwiParams& params,
                           CutoutMethod method, std::size_t count,
                           std::uint64_t cap) {
  if (count == 0)
    throw std::invalid_argument("sample_cutout: count must be > 0");
  CutoutSample sample;
  sample.lengths.resize(count);
  sample.lengths[0] = 0;
  for (std::size_t i = 1; i < count; ++i) {
    const std::uint64_t length = sample_cutout_length(rng, params, method, cap);
    if (length == cap) ++sample.capped_count;
    sample.lengths[i] = length;
  }
  return sample;
}

std::vector<std::uint8_t> uncovered_mask(
    const std::vector<std::uint64_t>& lengths) {
  std::vector<std::uint8_t> mask(lengths.size(), 0);
  std::uint64_t covered_until = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    // Update first: the interval seeded at i covers i itself when its
    // length is positive.
    covered_until = std::max(covered_until, i + lengths[i]);
    if (i >= covered_until) mask[i] = 1;
  }
  return mask;
}

std::vector<std::uint64_t> uncovered_set(
    const std::vector<std::uint64_t>& lengths) {
  const std::vector<std::uint8_t> mask = uncovered_mask(lengths);
  std::vector<std::uint64_t> points;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) points.push_back(i);
  return points;
}

std::vector<double> empirical_renewal_density(std::uint64_t seed,
                                              std::uint64_t stream_base,
                                              const GwiParams& params,
                                              CutoutMethod method,
                                              std::size_t horizon,
                                              std::size_t replicas) {
  if (replicas == 0)
    throw std::invalid_argument(
        "empirical_renewal_density: replicas must be > 0");
  std::vector<std::uint64_t> hits(horizon + 1, 0);
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream rng(seed, stream_base + r);
    const CutoutSample sample =
        sample_cutout(rng, params, method, horizon + 1, std::uint64_t{1} << 40);
    const std::vector<std::uint8_t> mask = uncovered_mask(sample.lengths);
    for (std::size_t j = 0; j <= horizon; ++j) hits[j] += mask[j];
  }
  std::vector<double> density(horizon + 1);
  for (std::size_t j = 0; j <= horizon; ++j)
    density[j] =
        static_cast<double>(hits[j]) / static_cast<double>(replicas);
  return density;
}

}  // namespace regenlab
