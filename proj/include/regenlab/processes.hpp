#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "regenlab/closed_form.hpp"
#include "regenlab/rng.hpp"

// Lattice path simulators: centered random walks, reflected walks, the
// perturbed nonnegative chain, and critical branching chains with and without
// immigration. All simulators draw exclusively from the RngStream they are
// handed, so a (seed, stream) pair fixes the path.

namespace regenlab {

// Step law of a centered lattice walk.
struct SimpleSymmetricStep {};  // +1 or -1, fair
struct HeavyTailStep {
  double alpha;  // tail exponent, in (1, 2)
};
using StepLaw = std::variant<SimpleSymmetricStep, HeavyTailStep>;

// Caches whatever the step law needs (the heavy-tail normalizer); build once
// outside hot loops.
class StepSampler {
public:
  explicit StepSampler(const StepLaw& law);

  std::int64_t operator()(RngStream& rng) const;

private:
  bool heavy_;
  std::variant<std::monostate, HeavyStepLaw> impl_;
};

// A lattice path together with its scaling: position index k stands for time
// k / mesh and value v for level v / space_scale.
struct ScaledLatticePath {
  std::uint64_t mesh = 1;
  double space_scale = 1.0;
  std::vector<std::int64_t> values;

  // Value at rescaled time t (piecewise constant between lattice times,
  // clamped to the final index).
  double value_at(double t) const;
  std::uint64_t steps() const {
    return values.empty() ? 0 : static_cast<std::uint64_t>(values.size()) - 1;
  }
};

// X_0 = 0, X_{k+1} = X_k + step; returns X_0..X_steps.
std::vector<std::int64_t> simulate_lattice_walk(RngStream& rng,
                                                const StepLaw& law,
                                                std::uint64_t steps);

// Wrap raw lattice values with their scaling.
ScaledLatticePath scale_walk(std::vector<std::int64_t> values,
                             std::uint64_t mesh, double space_scale);

// X_k - min_{j <= k} X_j: the walk reflected at its running minimum.
std::vector<std::int64_t> reflect_at_minimum(
    const std::vector<std::int64_t>& values);

// Nonnegative chain: from 0 it steps to 1; from 1 it steps to 0 with
// probability p and to 2 otherwise; from i >= 2 it steps +1/-1 fair. At
// p = 1/2 this chain is the absolute value of a fair walk; as p shrinks,
// returns to 0 are throttled. Returns X_0..X_steps, X_0 = 0.
std::vector<std::int64_t> simulate_perturbed_reflected_walk(RngStream& rng,
                                                            double p,
                                                            std::uint64_t steps);

// Critical branching chain, geometric(1/2) offspring: Z_{t+1} is a sum of
// Z_t iid geometric(1/2) counts, drawn as one batched negative binomial.
// Returns Z_0..Z_generations with Z_0 = z0.
std::vector<std::uint64_t> simulate_gw(RngStream& rng, std::uint64_t z0,
                                       std::uint64_t generations);

// Branching chain with immigration, Z_0 = 0:
//   Z_{t+1} = (sum of Z_t iid geometric(1/2) offspring) + I_t,
// with I_t drawn from the immigration law of `params`. Offspring are drawn
// one individual at a time.
std::vector<std::uint64_t> simulate_gwi_direct(RngStream& rng,
                                               const GwiParams& params,
                                               std::uint64_t generations);

// Same chain through its time-changed-walk construction: a centered walk
// X with increments (offspring - 1) is advanced Z_t draws per generation
// (batched into one negative binomial), and Z reads off the walk increments
// plus immigration. Distributionally identical to the direct simulator and
// O(1) draws per generation regardless of population size.
std::vector<std::uint64_t> simulate_gwi_timechange(RngStream& rng,
                                                   const GwiParams& params,
                                                   std::uint64_t generations);

// First return to zero of a centered walk started at 0.
struct FirstReturn {
  std::uint64_t steps = 0;  // min(R, cap)
  bool complete = false;    // true iff the walk actually hit 0 within cap
};

FirstReturn sample_first_return(RngStream& rng, const StepLaw& law,
                                std::uint64_t cap);
FirstReturn sample_first_return(RngStream& rng, const StepSampler& sampler,
                                std::uint64_t cap);

}  // namespace regenlab
