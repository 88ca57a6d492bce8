#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mallows/common.hpp"
#include "mallows/stats.hpp"

namespace mallows {

/// Crossing probabilities of the stochastic colored vertex: with incoming
/// colors i (below) and j (left), the paths cross (both continue straight)
/// with probability b1 when i < j and b2 when i > j, else they turn.
struct VertexParams {
  double b1, b2;
  VertexParams(double b1_, double b2_) : b1(b1_), b2(b2_) {
    if (!(b1 >= 0.0 && b1 <= 1.0 && b2 >= 0.0 && b2 <= 1.0)) {
      throw std::invalid_argument("VertexParams: b1, b2 must lie in [0,1]");
    }
  }
};

/// Rectangle of vertices, columns 0..width-1, rows 1..height. The standard
/// boundary injects color x at the bottom of column x and color -y at the
/// left of row y; entries may be absent for constructed test domains.
struct RectDomain {
  long long width, height;
  std::vector<std::optional<long long>> bottom;  // size width
  std::vector<std::optional<long long>> left;    // size height, index y-1

  static RectDomain standard(long long W, long long H);
  static RectDomain with_boundary(long long W, long long H,
                                  std::vector<std::optional<long long>> bottom,
                                  std::vector<std::optional<long long>> left);
  long long stochastic_vertex_bound(const VertexParams& vp) const;
};

struct PathExit {
  enum class Side { Top, Right } side;
  long long coord;  // exit column when Top, exit row when Right
};

/// One sampled (or enumerated) configuration, reduced to each color's exit.
struct SixVertexConfig {
  long long width = 0, height = 0;
  std::map<long long, PathExit> exits;
};

SixVertexConfig sample_lattice(const VertexParams& vp, const RectDomain& dom, SeededRng& rng);

/// Cut from (x_hat - 1/2, 0) to (height + y_hat + 1/2, height), with the
/// half-integers x_hat = x_enc + 1/2 and y_hat = y_enc + 1/2 carried as the
/// integers below them.
struct CutQuery {
  long long x_enc, y_enc;
};

/// Number of paths connecting the left and right boundaries of the cut's
/// sub-rectangle: colors <= x_enc that exit at column >= height + y_enc + 1
/// (right-edge exits count). Cut endpoints must lie inside the domain.
long long height_on_cut(const SixVertexConfig& cfg, const CutQuery& cut);

struct ExactHeightLaw {
  Pmf law;            // joint pmf of the height vector over the cut list
  double total_mass;  // partition-of-unity check
};

/// Exhaustive expansion of every Bernoulli branch; requires a small domain
/// (at most 20 stochastic vertices).
ExactHeightLaw enumerate_exact(const VertexParams& vp, const RectDomain& dom,
                               const std::vector<CutQuery>& cuts);

/// Cut-family data of the shift-invariance statement. Half-integers A..D and
/// the hat/tilde pairs are in doubled-integer form; g is a permutation of the
/// integer set calA = Z cap ((A,B) u (S+C, S+D)).
struct SupportData {
  long long A2, B2, C2, D2;
  long long S;
  std::vector<std::pair<long long, long long>> hats;    // (x2, y2) doubled
  std::vector<std::pair<long long, long long>> tildes;  // same length
  std::map<long long, long long> g;
};

struct SupportCheck {
  bool ok = false;
  long long witness = -1;  // 1-based first mismatching index
  std::vector<std::vector<long long>> hat_supports, tilde_supports;
};

/// supp(x_i, y_i) = {a in calA : x_i < a < S + y_i} versus
/// supp_g(x'_i, y'_i) = {b in calA : x'_i < g(b) < S + y'_i}, per index.
SupportCheck check_support_condition(const SupportData& sd);

struct ShiftInvarianceReport {
  bool exact = false;
  double max_dev = 0.0;  // exact mode: max pointwise law deviation
  double tv = 0.0;
  double p_value = 1.0;  // Monte Carlo mode: permutation test
  long long domain_w = 0, domain_h = 0;
};

/// Compares the joint height-vector law over the hat cuts against the tilde
/// cuts on a lattice sized from the data. Exact mode enumerates; Monte Carlo
/// mode samples n replicas per side. Refuses to run when the support
/// condition fails.
ShiftInvarianceReport verify_shift_invariance(const SupportData& sd, const VertexParams& vp,
                                              bool exact_mode, long long n_replicas, SeededRng& rng,
                                              long long extra_height = 0);

/// The worked two-cut fixture; at S = 2 its supports are {1,2,5,6} and {5}.
SupportData example_support_data(long long S = 2);

/// Fills in sd.g by exhaustively searching the permutations of calA for one
/// matching every hat support (needs |calA| <= 9); throws when none exists.
SupportData solve_support_permutation(SupportData sd);

/// Support-valid instance built from the interval-permutation point-event
/// encoding: positions i_1<...<i_k, values x_1>...>x_k give the 4k cuts whose
/// four-term height combinations pin the point events; the bounding box
/// covers both cut families and g is found by search.
SupportData make_interval_permutation_instance(const std::vector<long long>& is,
                                               const std::vector<long long>& xs, long long S);

/// Small randomized support-valid instance (two cuts, exact-enumerable
/// lattice): random box and permutation, cut pairs matched by their supports.
SupportData random_support_instance(SeededRng& rng);

}  // namespace mallows
