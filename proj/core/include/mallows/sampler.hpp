#pragma once

#include <vector>

#include "mallows/measures.hpp"
#include "mallows/stats.hpp"

namespace mallows {

/// A sampled finite window of the random permutation: values[m] is the image
/// of position start+m. Values are pairwise distinct.
struct WindowAssignment {
  long long start = 0;
  std::vector<long long> values;
  double tv_bound = 0.0;  // accumulated truncation error of the sampled law
};

/// Exact sequential sampler: omega(i0) from the single-site law, then each
/// omega(i0+m) from the conditional law given the prefix, over a support
/// window widened until it captures conditional mass >= 1 - policy.tol.
/// One uniform draw per coordinate (inverse CDF within the window).
WindowAssignment sample_window(const MallowsParams& p, long long i0, long long k, SeededRng& rng,
                               const TruncationPolicy& policy = {});

/// Histogram of the samples projected to the given coordinate subset
/// (0-based offsets into the window).
EmpiricalDist empirical_distribution(const std::vector<WindowAssignment>& samples,
                                     const std::vector<long long>& coords);

/// The sampler's exact output law, computed by exhausting every conditional
/// tree path (no randomness). Feasible for small k; used to bound the
/// sampler's TV error against the closed-form joint law.
Pmf sampler_law_exhaustive(const MallowsParams& p, long long i0, long long k,
                           const TruncationPolicy& policy = {});

}  // namespace mallows
