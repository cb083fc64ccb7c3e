#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "regenlab/closed_form.hpp"
#include "regenlab/rng.hpp"

// Statistical machinery shared by the experiments: empirical distribution
// functions, Kolmogorov-Smirnov distances that stay exact on lattice-valued
// samples, transform estimates, log-log slope fits, and a deterministic
// replicated runner.

namespace regenlab {

class EmpiricalCdf {
public:
  explicit EmpiricalCdf(std::vector<double> samples);  // sorts its copy

  // P_hat(X <= x), right-continuous.
  double operator()(double x) const;

  const std::vector<double>& sorted() const { return sorted_; }

private:
  std::vector<double> sorted_;
};

// sup_x |F_hat(x) - F(x)| against a right-continuous reference distribution
// function. Evaluated at the sample points from both sides, which attains
// the supremum for purely atomic references too.
double ks_distance(const std::vector<double>& samples, const Cdf& reference);

// Two-sample sup distance between empirical distribution functions; ties
// across the two samples are handled by advancing both at equal values.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// (1/N) sum exp(-lambda x_i).
double empirical_laplace(const std::vector<double>& samples, double lambda);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

MeanEstimate sample_mean(const std::vector<double>& samples);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
};

// Ordinary least squares of log y against log x; all entries must be
// positive.
SlopeFit loglog_slope(const std::vector<double>& x,
                      const std::vector<double>& y);

// Runs `replicas` independent evaluations of replica_fn, replica r drawing
// from RngStream(seed, stream_base + r), and returns the values in replica
// order. The work is sharded over threads; the output is identical for any
// thread count because each replica owns its stream and its output slot.
// threads == 0 picks the hardware concurrency.
std::vector<double> run_replicas(
    std::uint64_t seed, std::uint64_t stream_base, std::size_t replicas,
    const std::function<double(RngStream&)>& replica_fn, unsigned threads = 0);

}  // namespace regenlab
