#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Counting local time at zero of a lattice path, the excursion structure it
// induces (endpoints straddling a fixed time, the ordered gap sequence, the
// inverse of the local time), and the scaling constants that calibrate the
// zero-count against its continuum limit.

namespace regenlab {

// Running zero count: counts[k] = #{ j <= k : path[j] == 0 }. The count
// starts at counts[0] = 1 when the path starts at zero.
struct LocalTimeProfile {
  std::uint64_t mesh = 1;
  std::vector<std::uint64_t> counts;

  // Count at rescaled time t, i.e. counts[floor(mesh t)], clamped to the
  // final entry.
  std::uint64_t value_at(double t) const;
};

LocalTimeProfile local_time_profile(const std::vector<std::int64_t>& path,
                                    std::uint64_t mesh);

// The pair of zeros straddling rescaled time t: g is the last zero at or
// before t (the path must start at zero, so g always exists), d the first
// zero strictly after t, absent when the path ends before reaching one.
struct ExcursionEndpoints {
  double g = 0.0;
  std::optional<double> d;
};

ExcursionEndpoints excursion_endpoints(const std::vector<std::int64_t>& path,
                                       std::uint64_t mesh, double t);

// One gap between consecutive zeros, in lattice steps.
struct ExcursionRecord {
  std::uint64_t start = 0;
  std::uint64_t end = 0;     // index of the closing zero (or last index)
  std::uint64_t length = 0;  // end - start
  bool censored = false;     // true for the unfinished trailing gap
};

// All gaps between consecutive zeros of the path, in order; if the path ends
// strictly between zeros the trailing partial gap is appended censored.
std::vector<ExcursionRecord> excursion_lengths(
    const std::vector<std::int64_t>& path);

// The ordered jump sizes of the inverse of the zero count: jumps[i] is the
// gap (in lattice steps) between zero i and zero i+1.
struct JumpSequence {
  std::uint64_t mesh = 1;
  std::vector<std::uint64_t> jumps;
  bool censored_tail = false;  // path ended mid-gap; that gap is not listed
};

JumpSequence inverse_local_time(const std::vector<std::int64_t>& path,
                                std::uint64_t mesh);

// Copy of the sequence with every jump strictly greater than `threshold`
// replaced by a zero placeholder (positions are preserved).
JumpSequence truncate_big_jumps(const JumpSequence& seq,
                                std::uint64_t threshold);

// 1-based index of the first jump strictly greater than `threshold`, if any.
std::optional<std::uint64_t> big_jump_arrival_index(const JumpSequence& seq,
                                                    std::uint64_t threshold);

// Number of jumps j with lo < j <= hi.
std::uint64_t count_jumps_between(const JumpSequence& seq, std::uint64_t lo,
                                  std::uint64_t hi);

// An estimated tail probability with its binomial standard error.
struct TailEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;  // sample size behind the estimate
};

// Empirical P(length > threshold) over the given lengths.
TailEstimate empirical_tail(const std::vector<std::uint64_t>& lengths,
                            std::uint64_t threshold);

// Scaling constant a = (continuum excursion-measure tail) / (lattice
// excursion-law tail). Throws std::domain_error when the lattice tail is
// zero, since the ratio is then undefined.
double scaling_constant(double continuum_tail, double lattice_tail);

// Same ratio from an estimated lattice tail, with the delta-method standard
// error a * se / p.
TailEstimate scaling_constant(double continuum_tail,
                              const TailEstimate& lattice_tail);

// Companion scaling constant built from the one-dimensional marginals of the
// walk: exp(-sum_{k=1}^{K} (1/k) P(S_k < 0) exp(-k/n)), where
// negative_probs[k-1] = P(S_k < 0) and K = negative_probs.size().
double alt_scaling_constant(std::uint64_t n,
                            const std::vector<double>& negative_probs);

// P(S_k < 0) for k = 1..max_k for the simple symmetric walk, from the exact
// return probabilities: (1 - P(S_k = 0)) / 2.
std::vector<double> ssrw_negative_probabilities(std::uint64_t max_k);

// P(S_k < 0) for k = 1..max_k for an arbitrary finitely supported integer
// step law, by iterated exact convolution of the step mass function.
// step_pmf lists (offset, probability) pairs summing to 1.
std::vector<double> walk_negative_probabilities(
    const std::vector<std::pair<std::int64_t, double>>& step_pmf,
    std::uint64_t max_k);

}  // namespace regenlab
