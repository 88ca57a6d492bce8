#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mallows/common.hpp"

namespace mallows {

/// Integer-tuple outcome of a (joint) law.
using Outcome = std::vector<long long>;

/// A finite probability table. Mass may sum to slightly less than 1 when it
/// is a truncation of an infinite-support law.
struct Pmf {
  std::map<Outcome, double> mass;
  double total() const;
  static Pmf from_log(const std::map<Outcome, double>& log_mass);
};

inline Outcome scalar(long long v) { return Outcome{v}; }

/// Sampled histogram over outcomes.
struct EmpiricalDist {
  std::map<Outcome, std::uint64_t> counts;
  std::uint64_t n = 0;

  void add(const Outcome& o) {
    ++counts[o];
    ++n;
  }
  void add(long long v) { add(scalar(v)); }
  void merge(const EmpiricalDist& other);
  Pmf to_pmf() const;
};

double tv_distance(const Pmf& a, const Pmf& b);
double tv_distance(const EmpiricalDist& a, const Pmf& b);
double tv_distance(const EmpiricalDist& a, const EmpiricalDist& b);

struct GofResult {
  double statistic;
  long long dof;
  double p_value;
};

/// Pearson goodness-of-fit against the reference law p, with bins pooled
/// (deterministically, order-independently) until every pooled bin has
/// expected count >= min_bin. Throws if fewer than 2 pooled bins remain.
GofResult chi_square_gof(const EmpiricalDist& e, const Pmf& p, long long min_bin = 5);

struct RateCi {
  double rate, lo, hi;
};

/// Occupation-time MLE of a jump rate with a normal-approximation interval;
/// jumps = 0 degrades to the one-sided rule-of-three bound.
RateCi rate_ci(std::uint64_t jumps, double occupation, double level = 0.95);

}  // namespace mallows
