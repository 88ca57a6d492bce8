#pragma once

#include <map>

#include "mallows/measures.hpp"
#include "mallows/sampler.hpp"
#include "mallows/stats.hpp"

namespace mallows {

/// ASEP(q,M) window [-L, L]: per site up to M particles, exactly one
/// second-class particle in the system, exterior frozen (empty far left,
/// full far right).
struct AsepQMState {
  long long L = 0, M = 1;
  std::vector<int> firsts;   // first-class count per site, index pos+L
  std::vector<int> seconds;  // 0/1 per site
  double clock = 0.0;

  long long second_site() const;
  void validate() const;
};

/// Transition rate of table line 1..8 for the adjacent pair
/// {(n1,b1),(n2,b2)}; lines 1-4 read from {(n1,1),(n2,0)}, lines 5-8 from
/// {(n1,0),(n2,1)}.
double asepqm_rate(QParam q, long long M, int line, long long n1, long long n2);

/// Plain-pair hop rates (no second-class particle on either site).
double asepqm_plain_rate(QParam q, long long M, long long n1, long long n2, bool rightward);

struct AsepQMRun {
  std::map<long long, double> occupation;  // second-class site occupation after burn-in
  std::map<std::pair<long long, int>, std::uint64_t> tagged_jumps;  // (from site, +-1), after burn-in
  double averaged_time = 0.0;
  Pmf site_law;  // normalized occupation
  AsepQMState final_state;
};

/// Event-driven simulation started from the fused stationary sample
/// (conditioned on containing the tagged value); time-averages the
/// second-class site after burn_in.
AsepQMRun simulate_asepqm(const MallowsParams& p, long long M, long long L, double t_max,
                          double burn_in, SeededRng& rng, const TruncationPolicy& policy = {});

}  // namespace mallows
