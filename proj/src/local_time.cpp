#include "regenlab/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regenlab/closed_form.hpp"

namespace regenlab {

std::uint64_t LocalTimeProfile::value_at(double t) const {
  if (counts.empty())
    throw std::domain_error("LocalTimeProfile: empty profile");
  if (!(t >= 0.0))
    throw std::invalid_argument("LocalTimeProfile: t must be >= 0");
  std::uint64_t k =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(mesh) * t));
  if (k >= counts.size()) k = counts.size() - 1;
  return counts[k];
}

LocalTimeProfile local_time_profile(const std::vector<std::int64_t>& path,
                                    std::uint64_t mesh) {
  if (mesh == 0)
    throw std::invalid_argument("local_time_profile: mesh must be > 0");
  LocalTimeProfile profile;
  profile.mesh = mesh;
  profile.counts.resize(path.size());
  std::uint64_t count = 0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k] == 0) ++count;
    profile.counts[k] = count;
  }
  return profile;
}

ExcursionEndpoints excursion_endpoints(const std::vector<std::int64_t>& path,
                                       std::uint64_t mesh, double t) {
  if (mesh == 0)
    throw std::invalid_argument("excursion_endpoints: mesh must be > 0");
  if (path.empty() || path[0] != 0)
    throw std::invalid_argument(
        "excursion_endpoints: path must start at zero");
  if (!(t >= 0.0))
    throw std::invalid_argument("excursion_endpoints: t must be >= 0");
  std::uint64_t k =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(mesh) * t));
  if (k >= path.size()) k = path.size() - 1;
  std::uint64_t g_index = 0;
  for (std::uint64_t j = k + 1; j-- > 0;) {
    if (path[j] == 0) {
      g_index = j;
      break;
    }
  }
  ExcursionEndpoints out;
  out.g = static_cast<double>(g_index) / static_cast<double>(mesh);
  for (std::uint64_t j = k + 1; j < path.size(); ++j) {
    if (path[j] == 0) {
      out.d = static_cast<double>(j) / static_cast<double>(mesh);
      break;
    }
  }
  return out;
}

std::vector<ExcursionRecord> excursion_lengths(
    const std::vector<std::int64_t>& path) {
  if (path.empty() || path[0] != 0)
    throw std::invalid_argument("excursion_lengths: path must start at zero");
  std::vector<ExcursionRecord> records;
  std::uint64_t last_zero = 0;
  for (std::uint64_t k = 1; k < path.size(); ++k) {
    if (path[k] == 0) {
      records.push_back({last_zero, k, k - last_zero, false});
      last_zero = k;
    }
  }
  const std::uint64_t end = path.size() - 1;
  if (last_zero != end)
    records.push_back({last_zero, end, end - last_zero, true});
  return records;
}

JumpSequence inverse_local_time(const std::vector<std::int64_t>& path,
                                std::uint64_t mesh) {
  if (mesh == 0)
    throw std::invalid_argument("inverse_local_time: mesh must be > 0");
  JumpSequence seq;
  seq.mesh = mesh;
  for (const ExcursionRecord& rec : excursion_lengths(path)) {
    if (rec.censored)
      seq.censored_tail = true;
    else
      seq.jumps.push_back(rec.length);
  }
  return seq;
}

JumpSequence truncate_big_jumps(const JumpSequence& seq,
                                std::uint64_t threshold) {
  JumpSequence out = seq;
  for (std::uint64_t& j : out.jumps)
    if (j > threshold) j = 0;
  return out;
}

std::optional<std::uint64_t> big_jump_arrival_index(const JumpSequence& seq,
                                                    std::uint64_t threshold) {
  for (std::size_t i = 0; i < seq.jumps.size(); ++i)
    if (seq.jumps[i] > threshold) return i + 1;
  return std::nullopt;
}

std::uint64_t count_jumps_between(const JumpSequence& seq, std::uint64_t lo,
                                  std::uint64_t hi) {
  if (lo > hi)
    throw std::invalid_argument("count_jumps_between: lo must be <= hi");
  std::uint64_t count = 0;
  for (std::uint64_t j : seq.jumps)
    if (j > lo && j <= hi) ++count;
  return count;
}

TailEstimate empirical_tail(const std::vector<std::uint64_t>& lengths,
                            std::uint64_t threshold) {
  if (lengths.empty())
    throw std::invalid_argument("empirical_tail: no samples");
  std::uint64_t exceed = 0;
  for (std::uint64_t v : lengths)
    if (v > threshold) ++exceed;
  const double n = static_cast<double>(lengths.size());
  const double p = static_cast<double>(exceed) / n;
  TailEstimate est;
  est.value = p;
  est.std_error = std::sqrt(p * (1.0 - p) / n);
  est.count = lengths.size();
  return est;
}

double scaling_constant(double continuum_tail, double lattice_tail) {
  if (!(continuum_tail > 0.0))
    throw std::invalid_argument(
        "scaling_constant: continuum tail must be positive");
  if (!(lattice_tail > 0.0))
    throw std::domain_error(
        "scaling_constant: lattice tail is zero, ratio undefined");
  return continuum_tail / lattice_tail;
}

TailEstimate scaling_constant(double continuum_tail,
                              const TailEstimate& lattice_tail) {
  const double a = scaling_constant(continuum_tail, lattice_tail.value);
  TailEstimate est;
  est.value = a;
  est.std_error = a * lattice_tail.std_error / lattice_tail.value;
  est.count = lattice_tail.count;
  return est;
}

double alt_scaling_constant(std::uint64_t n,
                            const std::vector<double>& negative_probs) {
  if (n == 0)
    throw std::invalid_argument("alt_scaling_constant: n must be > 0");
  double sum = 0.0;
  // Summed smallest terms first: index k runs downward from K to 1.
  for (std::size_t i = negative_probs.size(); i-- > 0;) {
    const double k = static_cast<double>(i + 1);
    sum += negative_probs[i] / k * std::exp(-k / static_cast<double>(n));
  }
  return std::exp(-sum);
}

std::vector<double> ssrw_negative_probabilities(std::uint64_t max_k) {
  const std::vector<double> at_zero = ssrw_zero_probabilities(max_k);
  std::vector<double> out(max_k);
  for (std::uint64_t k = 1; k <= max_k; ++k)
    out[k - 1] = 0.5 * (1.0 - at_zero[k]);
  return out;
}

std::vector<double> walk_negative_probabilities(
    const std::vector<std::pair<std::int64_t, double>>& step_pmf,
    std::uint64_t max_k) {
  if (step_pmf.empty())
    throw std::invalid_argument("walk_negative_probabilities: empty step law");
  double total = 0.0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (const auto& [offset, prob] : step_pmf) {
    if (!(prob >= 0.0))
      throw std::invalid_argument(
          "walk_negative_probabilities: negative probability");
    total += prob;
    lo = std::min(lo, offset);
    hi = std::max(hi, offset);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "walk_negative_probabilities: step law must sum to 1");
  // pmf of S_k on the reachable window [k*lo, k*hi], convolved step by step.
  const std::int64_t span_lo = lo * static_cast<std::int64_t>(max_k);
  const std::int64_t offset0 = -span_lo;  // index shift into the array
  const std::size_t width = static_cast<std::size_t>(
      (hi - lo) * static_cast<std::int64_t>(max_k) + 1);
  std::vector<double> cur(width, 0.0), next(width, 0.0);
  cur[static_cast<std::size_t>(offset0)] = 1.0;
  std::vector<double> out(max_k);
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < width; ++i) {
      const double mass = cur[i];
      if (mass == 0.0) continue;
      for (const auto& [offset, prob] : step_pmf) {
        const std::int64_t target = static_cast<std::int64_t>(i) + offset;
        if (target >= 0 && target < static_cast<std::int64_t>(width))
          next[static_cast<std::size_t>(target)] += mass * prob;
      }
    }
    std::swap(cur, next);
    double below = 0.0;
    for (std::int64_t v = 0; v < offset0; ++v)
      below += cur[static_cast<std::size_t>(v)];
    out[k - 1] = below;
  }
  return out;
}

}  // namespace regenlab
