#include "regenlab/processes.hpp"

#include <cmath>
#include <stdexcept>

namespace regenlab {

StepSampler::StepSampler(const StepLaw& law) : heavy_(false) {
  if (const auto* heavy = std::get_if<HeavyTailStep>(&law)) {
    heavy_ = true;
    impl_.emplace<HeavyStepLaw>(heavy->alpha);
  }
}

std::int64_t StepSampler::operator()(RngStream& rng) const {
  if (heavy_) return std::get<HeavyStepLaw>(impl_).sample(rng);
  return rng.coin() ? 1 : -1;
}

double ScaledLatticePath::value_at(double t) const {
  if (values.empty())
    throw std::domain_error("ScaledLatticePath: empty path");
  if (!(t >= 0.0))
    throw std::invalid_argument("ScaledLatticePath: t must be >= 0");
  std::uint64_t k =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(mesh) * t));
  if (k >= values.size()) k = values.size() - 1;
  return static_cast<double>(values[k]) / space_scale;
}

std::vector<std::int64_t> simulate_lattice_walk(RngStream& rng,
                                                const StepLaw& law,
                                                std::uint64_t steps) {
  const StepSampler sampler(law);
  std::vector<std::int64_t> values(steps + 1);
  values[0] = 0;
  std::int64_t x = 0;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    x += sampler(rng);
    values[k] = x;
  }
  return values;
}

ScaledLatticePath scale_walk(std::vector<std::int64_t> values,
                             std::uint64_t mesh, double space_scale) {
  if (mesh == 0) throw std::invalid_argument("scale_walk: mesh must be > 0");
  if (!(space_scale > 0.0))
    throw std::invalid_argument("scale_walk: space_scale must be positive");
  ScaledLatticePath path;
  path.mesh = mesh;
  path.space_scale = space_scale;
  path.values = std::move(values);
  return path;
}

std::vector<std::int64_t> reflect_at_minimum(
    const std::vector<std::int64_t>& values) {
  std::vector<std::int64_t> out(values.size());
  std::int64_t running_min = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < running_min) running_min = values[k];
    out[k] = values[k] - running_min;
  }
  return out;
}

std::vector<std::int64_t> simulate_perturbed_reflected_walk(
    RngStream& rng, double p, std::uint64_t steps) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument(
        "simulate_perturbed_reflected_walk: p must lie in (0, 1]");
  std::vector<std::int64_t> values(steps + 1);
  values[0] = 0;
  std::int64_t x = 0;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    if (x == 0) {
      x = 1;
    } else if (x == 1) {
      // A biased down-step; p = 1/2 recovers |fair walk|.
      x = (rng.uniform() < p) ? 0 : 2;
    } else {
      x += rng.coin() ? 1 : -1;
    }
    values[k] = x;
  }
  return values;
}

std::vector<std::uint64_t> simulate_gw(RngStream& rng, std::uint64_t z0,
                                       std::uint64_t generations) {
  std::vector<std::uint64_t> z(generations + 1);
  z[0] = z0;
  std::uint64_t cur = z0;
  for (std::uint64_t t = 1; t <= generations; ++t) {
    // Sum of cur iid geometric(1/2) offspring counts.
    cur = sample_negative_binomial(rng, cur, 0.5);
    z[t] = cur;
  }
  return z;
}

std::vector<std::uint64_t> simulate_gwi_direct(RngStream& rng,
                                               const GwiParams& params,
                                               std::uint64_t generations) {
  const double s = params.immigration_success();
  std::vector<std::uint64_t> z(generations + 1);
  z[0] = 0;
  std::uint64_t cur = 0;
  for (std::uint64_t t = 1; t <= generations; ++t) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < cur; ++i)
      next += sample_geometric(rng, 0.5);
    next += sample_geometric(rng, s);
    z[t] = next;
    cur = next;
  }
  return z;
}

std::vector<std::uint64_t> simulate_gwi_timechange(RngStream& rng,
                                                   const GwiParams& params,
                                                   std::uint64_t generations) {
  const double s = params.immigration_success();
  std::vector<std::uint64_t> z(generations + 1);
  z[0] = 0;
  std::uint64_t cur = 0;
  // Generation t advances the underlying offspring walk cur ticks; the
  // batched negative binomial is that whole walk segment in one draw, so the
  // cost per generation is O(1) no matter how large the population gets.
  for (std::uint64_t t = 1; t <= generations; ++t) {
    const std::uint64_t offspring = sample_negative_binomial(rng, cur, 0.5);
    const std::uint64_t next = offspring + sample_geometric(rng, s);
    z[t] = next;
    cur = next;
  }
  return z;
}

FirstReturn sample_first_return(RngStream& rng, const StepLaw& law,
                                std::uint64_t cap) {
  return sample_first_return(rng, StepSampler(law), cap);
}

FirstReturn sample_first_return(RngStream& rng, const StepSampler& sampler,
                                std::uint64_t cap) {
  FirstReturn result;
  std::int64_t x = 0;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    x += sampler(rng);
    if (x == 0) {
      result.steps = k;
      result.complete = true;
      return result;
    }
  }
  result.steps = cap;
  result.complete = false;
  return result;
}

}  // namespace regenlab
