#pragma once

#include <cstdint>
#include <vector>

#include "regenlab/closed_form.hpp"
#include "regenlab/rng.hpp"

// Random cutout of the integers: each site i carries an independent length
// L_i with the clan-lifetime law of the immigration chain, interval
// [i, i + L_i) is removed, and the surviving sites form the residual set.
// With L_0 forced to zero, the law of the residual set matches the zero set
// of the immigration chain started empty.

namespace regenlab {

enum class CutoutMethod {
  kSimulate,  // run the branching clan generation by generation
  kInvert,    // closed-form inversion of the lifetime distribution function
};

// One lifetime draw, capped at `cap` (a capped draw returns exactly `cap`).
std::uint64_t sample_cutout_length(RngStream& rng, const GwiParams& params,
                                   CutoutMethod method, std::uint64_t cap);

// Lengths for sites 0..count-1 with lengths[0] forced to zero, so site 0 is
// always a residual point; capped_count reports how many draws hit the cap.
struct CutoutSample {
  std::vector<std::uint64_t> lengths;
  std::uint64_t capped_count = 0;
};

CutoutSample sample_cutout(RngStream& rng, const GwiParams& params,
                           CutoutMethod method, std::size_t count,
                           std::uint64_t cap);

// Residual sites of the cutout: i survives iff no j <= i has j + L_j > i.
// Single ascending sweep over the lengths.
std::vector<std::uint64_t> uncovered_set(
    const std::vector<std::uint64_t>& lengths);

// Bit mask form of the same sweep: mask[i] == 1 iff site i survives.
std::vector<std::uint8_t> uncovered_mask(
    const std::vector<std::uint64_t>& lengths);

// P(site j survives) for j = 0..horizon, averaged over `replicas`
// independent cutouts. Streams are derived from (seed, stream_base + r).
std::vector<double> empirical_renewal_density(std::uint64_t seed,
                                              std::uint64_t stream_base,
                                              const GwiParams& params,
                                              CutoutMethod method,
                                              std::size_t horizon,
                                              std::size_t replicas);

}  // namespace regenlab
