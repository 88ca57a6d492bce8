#pragma once

#include <optional>
#include <vector>

#include "mallows/measures.hpp"
#include "mallows/sampler.hpp"
#include "mallows/stats.hpp"

namespace mallows {

/// Finite window [-L, L] of the infinite lattice with frozen identity
/// exterior. Raw mode holds permutation values; projected mode holds small
/// class labels (equal neighbors are then inert).
struct AsepWindowState {
  long long lo = 0, hi = 0;
  std::vector<long long> labels;  // labels[pos - lo]
  bool projected = false;
  double clock = 0.0;

  long long label(long long pos) const { return labels[static_cast<std::size_t>(pos - lo)]; }
  long long size() const { return hi - lo + 1; }

  static AsepWindowState identity(long long L);
  static AsepWindowState from_assignment(const WindowAssignment& w);
  /// Map raw values through a non-decreasing label map (class projection).
  template <typename F>
  AsepWindowState project_with(F&& f) const {
    AsepWindowState out = *this;
    out.projected = true;
    for (auto& v : out.labels) v = f(v);
    return out;
  }
};

struct JumpEvent {
  double time;
  long long bond;  // swap acted on sites (bond, bond+1)
  bool sorting;    // true: rate-1 move (pair was decreasing)
};

/// Event-driven continuous-time evolution: each interior bond swaps a
/// decreasing pair at rate 1 and an increasing pair at rate q. The exterior
/// stays frozen. Appends to trace when provided.
void simulate(AsepWindowState& state, const MallowsParams& p, double t_max, SeededRng& rng,
              std::vector<JumpEvent>* trace = nullptr);

/// Replicated run from the identity configuration to time t; histograms the
/// values at the given coordinates (absolute positions).
EmpiricalDist run_step_convergence(const MallowsParams& p, long long L, double t, long long replicas,
                                   const std::vector<long long>& coords, std::uint64_t seed);

struct RateEstimate {
  long long x;
  int direction;  // +1 or -1
  std::uint64_t jumps = 0;
  double occupation = 0.0;
  double rate = 0.0;
  double stderr_ = 0.0;
};

struct SecondClassRun {
  std::vector<RateEstimate> rates;          // for x in [x_min, x_max], both directions
  std::map<long long, double> occupation;   // tagged-particle occupation time per site
  double total_time = 0.0;
};

/// Tagged second-class particle in the stationary blocking background:
/// replicas initialized from sample_window projected to (hole, tagged, first)
/// classes, conditioned on containing the tagged value 0.
SecondClassRun estimate_second_class_rates(const MallowsParams& p, long long L, double t_max,
                                           long long replicas, long long x_min, long long x_max,
                                           std::uint64_t seed, const TruncationPolicy& policy = {});

struct ReversibilityReport {
  double max_db_residual = 0.0;  // max |pi_i q_ij - pi_j q_ji|
  double max_row_sum = 0.0;      // generator row-sum defect
  long long states = 0;
};

/// Full-generator detailed-balance check of the n-label chain on n sites with
/// closed boundary against the measure proportional to q^{inversions}.
ReversibilityReport exact_reversibility_check(long long n, QParam q);

/// Number of values <= value_cut sitting at positions > position_cut, with
/// the half-integer thresholds encoded by the integer below them. Finite by
/// the frozen-identity exterior; raw mode only.
long long height_function(const AsepWindowState& state, long long value_cut, long long position_cut);

}  // namespace mallows
