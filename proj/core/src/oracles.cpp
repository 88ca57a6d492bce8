#include <algorithm>
#include <cmath>
#include <vector>

#include "mallows/measures.hpp"

namespace mallows {

namespace {

// Neumaier compensated accumulator for the long positive sums.
struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

long long inversions(const std::vector<long long>& w) {
  long long inv = 0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      if (w[a] > w[b]) ++inv;
    }
  }
  return inv;
}

// Constrained double sum of the ergodic joint law, without the prefactor.
// ds already shifted so the balance is zero.
double go_joint_term_sum(QPochTable& tab, const std::vector<long long>& ds,
                         const TruncationPolicy& policy) {
  const long long k = static_cast<long long>(ds.size());
  const double q = tab.q();

  // free a_1..a_{k-1} over the finite gap ranges, a_k truncated, b's determined
  std::vector<long long> a(static_cast<std::size_t>(k), 0);
  std::vector<long long> gap(static_cast<std::size_t>(k), 0);
  for (long long m = 1; m < k; ++m) gap[static_cast<std::size_t>(m)] = ds[static_cast<std::size_t>(m)] - ds[static_cast<std::size_t>(m - 1)];

  Kahan acc;
  std::int64_t terms = 0;

  // odometer over a_1..a_{k-1}
  while (true) {
    long long base = ds[0];
    double den_fixed = 1.0;
    bool feasible = true;
    for (long long j = 1; j < k; ++j) {
      base += a[static_cast<std::size_t>(j - 1)];
      const long long bj = gap[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(j - 1)];
      if (bj < 0) {
        feasible = false;
        break;
      }
      den_fixed *= tab.poch(bj) * tab.poch(a[static_cast<std::size_t>(j - 1)]);
    }
    if (feasible) {
      // B_j = sum_{i<=j} (b_i+1); only b_1 varies with a_k
      std::vector<long long> bsum_rest(static_cast<std::size_t>(k), 0);  // sum_{2<=i<=j}(b_i+1)
      long long run = 0;
      for (long long j = 1; j < k; ++j) {
        run += gap[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(j - 1)] + 1;
        bsum_rest[static_cast<std::size_t>(j)] = run;
      }
      const double inv_den_fixed = 1.0 / den_fixed;
      double prev = std::numeric_limits<double>::infinity();
      for (long long ak = std::max<long long>(0, -base);; ++ak) {
        const long long b1 = base + ak;
        a[static_cast<std::size_t>(k - 1)] = ak;
        long long expo = 0;
        for (long long j = 0; j < k; ++j) {
          expo += (a[static_cast<std::size_t>(j)] + 1) * (b1 + 1 + bsum_rest[static_cast<std::size_t>(j)]);
        }
        const double term = tab.qpow(expo) * inv_den_fixed / (tab.poch(b1) * tab.poch(ak));
        acc.add(term);
        if (++terms > policy.max_terms) throw TruncationError("go_pmf_joint: max_terms exhausted");
        if (term <= prev && term < policy.tol * std::max(acc.value(), 1e-300) && ak > 2) break;
        prev = term;
      }
    }
    // advance odometer over the first k-1 coordinates
    long long pos = 0;
    for (; pos < k - 1; ++pos) {
      if (a[static_cast<std::size_t>(pos)] < gap[static_cast<std::size_t>(pos + 1)]) {
        ++a[static_cast<std::size_t>(pos)];
        for (long long r = 0; r < pos; ++r) a[static_cast<std::size_t>(r)] = 0;
        break;
      }
    }
    if (pos == k - 1) break;
  }
  return acc.value();
}

double go_joint_log(QPochTable& tab, long long c, const std::vector<long long>& ds,
                    const TruncationPolicy& policy) {
  const long long k = static_cast<long long>(ds.size());
  const double q = tab.q();
  std::vector<long long> shifted = ds;
  for (auto& d : shifted) d -= c;
  const double s = go_joint_term_sum(tab, shifted, policy);
  if (s <= 0.0) return kNegInf;
  double lp = std::log(s) + static_cast<double>(k) * std::log1p(-q) -
              0.5 * static_cast<double>(k) * static_cast<double>(k + 1) * std::log(q) +
              qpoch_inf_log(QParam(q), policy);
  for (long long m = 1; m < k; ++m) {
    lp += tab.log_poch(ds[static_cast<std::size_t>(m)] - ds[static_cast<std::size_t>(m - 1)]);
  }
  return lp;
}

}  // namespace

LogProb go_pmf_displacement(QParam q, long long c, long long d, const TruncationPolicy& policy) {
  if (q.q == 0.0) return d == c ? LogProb::one() : LogProb::zero();
  QPochTable tab(q);
  const long long dc = d - c;
  Kahan acc;
  double prev = std::numeric_limits<double>::infinity();
  for (std::int64_t l = std::max<long long>(0, -dc);; ++l) {
    const long long r = dc + l;
    const double term = tab.qpow(r * l + r + l) / (tab.poch(r) * tab.poch(l));
    acc.add(term);
    if (l > policy.max_terms) throw TruncationError("go_pmf_displacement: max_terms exhausted");
    if (term <= prev && term < policy.tol * std::max(acc.value(), 1e-300) && l > 2) break;
    prev = term;
  }
  if (acc.value() <= 0.0) return LogProb::zero();
  return LogProb(std::log(acc.value()) + std::log1p(-q.q) + qpoch_inf_log(q, policy));
}

LogProb go_pmf_joint(QParam q, long long c, const std::vector<long long>& ds,
                     const TruncationPolicy& policy) {
  if (ds.empty()) throw std::invalid_argument("go_pmf_joint: needs k >= 1 displacements");
  if (!std::is_sorted(ds.begin(), ds.end())) {
    throw std::invalid_argument("go_pmf_joint: displacements must be weakly increasing");
  }
  if (q.q == 0.0) {
    for (long long d : ds) {
      if (d != c) return LogProb::zero();
    }
    return LogProb::one();
  }
  if (ds.size() == 1) return go_pmf_displacement(q, c, ds[0], policy);
  QPochTable tab(q);
  return LogProb(go_joint_log(tab, c, ds, policy));
}

OracleResult oracle_mixture_pmf(const MallowsParams& p, long long i, const std::vector<long long>& values,
                                long long c_max, const TruncationPolicy& policy) {
  const long long k = static_cast<long long>(values.size());
  if (k < 1) throw std::invalid_argument("oracle_mixture_pmf: needs k >= 1 values");
  std::vector<long long> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("oracle_mixture_pmf: values must be pairwise distinct");
  }
  if (p.q.q == 0.0) return {pmf_neighbors(p, i, values), 0.0};

  const long long inv = inversions(values);
  std::vector<long long> ds(static_cast<std::size_t>(k));
  for (long long j = 1; j <= k; ++j) ds[static_cast<std::size_t>(j - 1)] = sorted[static_cast<std::size_t>(j - 1)] - (i + j);

  const bool auto_radius = c_max <= 0;
  const long long C = auto_radius ? mixture_weight_radius(p.q, p.alpha, policy.tol) : c_max;
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  const double logZ = qpoch_inf_log(p.q, policy) + tail_product_log(p.alpha, p.q, 0.5, policy) +
                      tail_product_log(1.0 / p.alpha, p.q, 0.5, policy);
  auto log_w = [&](long long c) {
    return static_cast<double>(c) * la + 0.5 * static_cast<double>(c) * static_cast<double>(c) * ln_q - logZ;
  };

  QPochTable tab(p.q);
  Kahan acc;
  for (long long c = -C; c <= C; ++c) {
    const double lw = log_w(c);
    if (lw < -745.0) continue;
    const double lj = go_joint_log(tab, c, ds, policy);
    if (lj == kNegInf) continue;
    acc.add(std::exp(lw + lj));
  }

  // neglected components: geometric bounds on the weight tails (joint <= 1)
  double tail = 0.0;
  const double rp = p.alpha * std::exp((static_cast<double>(C) + 0.5) * ln_q);
  const double rm = (1.0 / p.alpha) * std::exp((static_cast<double>(C) - 0.5) * ln_q);
  if (rp < 1.0 && rm < 1.0) {
    tail = std::exp(log_w(C)) * rp / (1.0 - rp) + std::exp(log_w(-C)) * rm / (1.0 - rm);
  } else {
    tail = 1.0;  // radius did not reach the decaying regime
  }
  if (!auto_radius && tail > policy.tol) {
    throw TruncationError("oracle_mixture_pmf: component tail bound above tolerance");
  }

  OracleResult out;
  out.tail_bound = tail;
  out.log_prob = acc.value() > 0.0 ? LogProb(std::log(acc.value()) + static_cast<double>(inv) * ln_q)
                                   : LogProb::zero();
  return out;
}

namespace {

// Sum over strictly increasing chains z_{ja} < ... < z_{jb} inside the open
// interval (vlo, vhi) clipped to [lo, hi], of prod_j g[j][z].
double run_chain_sum(const std::vector<std::vector<double>>& g, long long lo, long long hi,
                     long long ja, long long jb, long long vlo, long long vhi) {
  const long long zmin = std::max(lo, vlo + 1), zmax = std::min(hi, vhi - 1);
  const long long len = jb - ja + 1;
  if (zmax - zmin + 1 < len) return 0.0;
  const std::size_t width = static_cast<std::size_t>(zmax - zmin + 1);
  std::vector<double> suffix(width + 1, 0.0);
  // bottom rank jb
  for (std::size_t idx = width; idx-- > 0;) {
    const long long z = zmin + static_cast<long long>(idx);
    suffix[idx] = suffix[idx + 1] + g[static_cast<std::size_t>(jb - 1)][static_cast<std::size_t>(z - lo)];
  }
  std::vector<double> next(width + 1, 0.0);
  for (long long j = jb - 1; j >= ja; --j) {
    next.assign(width + 1, 0.0);
    for (std::size_t idx = width; idx-- > 0;) {
      const long long z = zmin + static_cast<long long>(idx);
      const double tail = (idx + 1 <= width) ? suffix[idx + 1] : 0.0;
      next[idx] = next[idx + 1] + g[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(z - lo)] * tail;
    }
    suffix.swap(next);
  }
  return suffix[0];
}

}  // namespace

OracleResult oracle_marginalized_pmf(const MallowsParams& p, const PositionValuePairs& pv,
                                     const TruncationPolicy& policy) {
  const long long k = static_cast<long long>(pv.size());
  if (k < 1) throw std::invalid_argument("oracle_marginalized_pmf: needs k >= 1 pairs");
  pv.require_distinct_values();
  const long long P0 = pv.pairs.front().first;
  const long long span = pv.pairs.back().first - P0;
  if (span > 8) throw std::invalid_argument("oracle_marginalized_pmf: span exceeds 8");

  if (p.q.q == 0.0) {
    for (const auto& [pos, val] : pv.pairs) {
      if (val != pos) return {LogProb::zero(), 0.0};
    }
    return {LogProb::one(), 0.0};
  }

  const long long n = span + 1;
  const long long i_base = P0 - 1;
  const double ln_q = p.q.log_q(), la = p.log_alpha();

  // pinned pairs sorted by value; block positions are 0-based offsets
  std::vector<std::pair<long long, long long>> by_value;  // (value, block position)
  for (const auto& [pos, val] : pv.pairs) by_value.emplace_back(val, pos - P0);
  std::sort(by_value.begin(), by_value.end());

  // value window wide enough that each free coordinate's geometric tail is
  // below tol
  const long long shift = std::llround(-la / ln_q);
  const long long R =
      static_cast<long long>(std::ceil(std::log(policy.tol * (1.0 - p.q.q) / (2.0 * static_cast<double>(n))) / ln_q)) +
      n + 8;
  long long lo = std::min(by_value.front().first, P0 + shift) - R;
  long long hi = std::max(by_value.back().first, P0 + n - 1 + shift) + R;
  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
  if (width > static_cast<std::size_t>(policy.max_terms)) {
    throw TruncationError("oracle_marginalized_pmf: window exceeds max_terms");
  }

  // g[j-1][z-lo] = (1-q) alpha q^z / [(1+alpha q^{z-i+j-n-3/2})(1+alpha q^{z-i+j-n-1/2})]
  std::vector<std::vector<double>> g(static_cast<std::size_t>(n), std::vector<double>(width));
  for (long long j = 1; j <= n; ++j) {
    for (long long z = lo; z <= hi; ++z) {
      const long long e = z - i_base + j - n;
      const double lg = std::log1p(-p.q.q) + la + static_cast<double>(z) * ln_q -
                        log1p_alpha_qpow(la, ln_q, 2 * e - 3) - log1p_alpha_qpow(la, ln_q, 2 * e - 1);
      g[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(z - lo)] = std::exp(lg);
    }
  }

  // enumerate the rank subsets carrying the pinned values
  std::vector<long long> ranks(static_cast<std::size_t>(k));
  for (long long t = 0; t < k; ++t) ranks[static_cast<std::size_t>(t)] = t + 1;

  Kahan total;
  const long long m = n - k;  // free ranks
  while (true) {
    // pinned-pinned inversions (ranks in value order, positions as given)
    long long pinned_inv = 0;
    for (long long t1 = 0; t1 < k; ++t1) {
      for (long long t2 = t1 + 1; t2 < k; ++t2) {
        if (by_value[static_cast<std::size_t>(t1)].second > by_value[static_cast<std::size_t>(t2)].second) ++pinned_inv;
      }
    }
    // free ranks / free block positions
    std::vector<long long> free_ranks, free_pos;
    {
      std::vector<bool> rank_taken(static_cast<std::size_t>(n + 1), false), pos_taken(static_cast<std::size_t>(n), false);
      for (long long t = 0; t < k; ++t) {
        rank_taken[static_cast<std::size_t>(ranks[static_cast<std::size_t>(t)])] = true;
        pos_taken[static_cast<std::size_t>(by_value[static_cast<std::size_t>(t)].second)] = true;
      }
      for (long long j = 1; j <= n; ++j) {
        if (!rank_taken[static_cast<std::size_t>(j)]) free_ranks.push_back(j);
      }
      for (long long bp = 0; bp < n; ++bp) {
        if (!pos_taken[static_cast<std::size_t>(bp)]) free_pos.push_back(bp);
      }
    }

    // chain sums over the maximal runs of free ranks
    double chains = 1.0;
    {
      std::size_t t = 0;
      while (t < free_ranks.size() && chains > 0.0) {
        std::size_t u = t;
        while (u + 1 < free_ranks.size() && free_ranks[u + 1] == free_ranks[u] + 1) ++u;
        const long long ja = free_ranks[t], jb = free_ranks[u];
        // bounding pinned values around this run
        long long vlo = lo - 1, vhi = hi + 1;
        for (long long tt = k - 1; tt >= 0; --tt) {
          if (ranks[static_cast<std::size_t>(tt)] < ja) {
            vlo = by_value[static_cast<std::size_t>(tt)].first;
            break;
          }
        }
        for (long long tt = 0; tt < k; ++tt) {
          if (ranks[static_cast<std::size_t>(tt)] > jb) {
            vhi = by_value[static_cast<std::size_t>(tt)].first;
            break;
          }
        }
        chains *= run_chain_sum(g, lo, hi, ja, jb, vlo, vhi);
        t = u + 1;
      }
    }

    if (chains > 0.0) {
      // pinned g product
      double pinned_g = 1.0;
      for (long long t = 0; t < k; ++t) {
        pinned_g *= g[static_cast<std::size_t>(ranks[static_cast<std::size_t>(t)] - 1)]
                     [static_cast<std::size_t>(by_value[static_cast<std::size_t>(t)].first - lo)];
      }

      // inversion-generating sum over bijections free ranks -> free positions,
      // including the cross terms against the pinned assignment
      double wfree = 1.0;
      if (m > 0) {
        std::vector<double> dp(static_cast<std::size_t>(1) << m, 0.0);
        dp[0] = 1.0;
        std::vector<std::vector<long long>> cross(static_cast<std::size_t>(m), std::vector<long long>(static_cast<std::size_t>(m), 0));
        for (long long t = 0; t < m; ++t) {
          for (long long u = 0; u < m; ++u) {
            long long c = 0;
            for (long long tt = 0; tt < k; ++tt) {
              const long long pr = ranks[static_cast<std::size_t>(tt)];
              const long long pp = by_value[static_cast<std::size_t>(tt)].second;
              if (pr > free_ranks[static_cast<std::size_t>(t)] && pp < free_pos[static_cast<std::size_t>(u)]) ++c;
              if (pr < free_ranks[static_cast<std::size_t>(t)] && pp > free_pos[static_cast<std::size_t>(u)]) ++c;
            }
            cross[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)] = c;
          }
        }
        for (std::size_t mask = 0; mask + 1 < dp.size(); ++mask) {
          if (dp[mask] == 0.0) continue;
          const int t = __builtin_popcountll(mask);  // next free rank index
          for (long long u = 0; u < m; ++u) {
            if (mask & (static_cast<std::size_t>(1) << u)) continue;
            long long invadd = cross[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)];
            for (long long u2 = u + 1; u2 < m; ++u2) {
              if (mask & (static_cast<std::size_t>(1) << u2)) ++invadd;  // earlier rank at larger position
            }
            dp[mask | (static_cast<std::size_t>(1) << u)] +=
                dp[mask] * std::exp(static_cast<double>(invadd) * ln_q);
          }
        }
        wfree = dp.back();
      }

      total.add(std::exp(static_cast<double>(pinned_inv) * ln_q) * wfree * chains * pinned_g);
    }

    // next k-combination of ranks out of 1..n
    long long t = k - 1;
    while (t >= 0 && ranks[static_cast<std::size_t>(t)] == n - (k - 1 - t)) --t;
    if (t < 0) break;
    ++ranks[static_cast<std::size_t>(t)];
    for (long long tt = t + 1; tt < k; ++tt) ranks[static_cast<std::size_t>(tt)] = ranks[static_cast<std::size_t>(tt - 1)] + 1;
  }

  // crude edge-mass bound: per-rank boundary weight against the worst partial
  // products, geometric beyond the window
  double edge = 0.0;
  for (long long j = 1; j <= n; ++j) {
    edge += g[static_cast<std::size_t>(j - 1)].front() + g[static_cast<std::size_t>(j - 1)].back();
  }
  edge /= (1.0 - p.q.q);
  if (edge > std::sqrt(policy.tol)) {
    throw TruncationError("oracle_marginalized_pmf: window tail bound violated");
  }

  const double log_pref = -0.5 * static_cast<double>(n) * static_cast<double>(2 * n + 2 * i_base + 1) * ln_q;
  OracleResult out;
  out.tail_bound = edge;
  out.log_prob = total.value() > 0.0 ? LogProb(std::log(total.value()) + log_pref) : LogProb::zero();
  return out;
}

}  // namespace mallows
