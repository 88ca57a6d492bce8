#include "mallows/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mallows {

PositionValuePairs PositionValuePairs::of(std::vector<std::pair<long long, long long>> pv) {
  for (std::size_t j = 1; j < pv.size(); ++j) {
    if (pv[j].first <= pv[j - 1].first) {
      throw std::invalid_argument("PositionValuePairs: positions must be strictly increasing");
    }
  }
  PositionValuePairs out;
  out.pairs = std::move(pv);
  return out;
}

void PositionValuePairs::require_distinct_values() const {
  std::vector<long long> vals;
  vals.reserve(pairs.size());
  for (const auto& [pos, v] : pairs) vals.push_back(v);
  std::sort(vals.begin(), vals.end());
  if (std::adjacent_find(vals.begin(), vals.end()) != vals.end()) {
    throw std::invalid_argument("PositionValuePairs: values must be pairwise distinct");
  }
}

namespace {

long long inversions(const std::vector<long long>& w) {
  long long inv = 0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      if (w[a] > w[b]) ++inv;
    }
  }
  return inv;
}

}  // namespace

LogProb pmf_single(const MallowsParams& p, long long i, long long x) {
  const long long d = x - i;
  if (p.q.q == 0.0) return d == 0 ? LogProb::one() : LogProb::zero();
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  const double lp = std::log1p(-p.q.q) + la + (static_cast<double>(d) - 0.5) * ln_q -
                    log1p_alpha_qpow(la, ln_q, 2 * d - 1) - log1p_alpha_qpow(la, ln_q, 2 * d + 1);
  return LogProb(lp);
}

LogProb pmf_neighbors(const MallowsParams& p, long long i, const std::vector<long long>& values) {
  const long long k = static_cast<long long>(values.size());
  if (k < 1) throw std::invalid_argument("pmf_neighbors: needs k >= 1 values");
  std::vector<long long> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("pmf_neighbors: values must be pairwise distinct");
  }
  if (p.q.q == 0.0) {
    for (long long j = 0; j < k; ++j) {
      if (values[static_cast<std::size_t>(j)] != i + 1 + j) return LogProb::zero();
    }
    return LogProb::one();
  }
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  const long long inv = inversions(values);

  // sorted values z_1 < ... < z_k at consecutive positions give weakly
  // increasing displacements d_j = z_j - (i+j)
  double lp = static_cast<double>(inv) * ln_q +
              static_cast<double>(k) * (std::log1p(-p.q.q) + la);
  long long sum_d2 = 0;  // doubled exponent: 2*sum(d_j) - k^2
  for (long long j = 1; j <= k; ++j) {
    const long long d = sorted[static_cast<std::size_t>(j - 1)] - (i + j);
    sum_d2 += 2 * d;
    lp -= log1p_alpha_qpow(la, ln_q, 2 * (d + 2 * j - k) - 3);
    lp -= log1p_alpha_qpow(la, ln_q, 2 * (d + 2 * j - k) - 1);
  }
  sum_d2 -= k * k;
  lp += 0.5 * static_cast<double>(sum_d2) * ln_q;
  return LogProb(lp);
}

LogProb pmf_decreasing(const MallowsParams& p, const PositionValuePairs& pv) {
  for (std::size_t j = 1; j < pv.pairs.size(); ++j) {
    if (pv.pairs[j].second >= pv.pairs[j - 1].second) {
      throw std::invalid_argument("pmf_decreasing: values must be strictly decreasing");
    }
  }
  double lp = 0.0;
  for (const auto& [pos, val] : pv.pairs) lp += pmf_single(p, pos, val).log_value;
  return LogProb(lp);
}

LogProb cdf_product(const MallowsParams& p, const PositionValuePairs& pv) {
  if (pv.pairs.empty()) throw std::invalid_argument("cdf_product: needs at least one pair");
  for (std::size_t j = 1; j < pv.pairs.size(); ++j) {
    if (pv.pairs[j].second > pv.pairs[j - 1].second) {
      throw std::invalid_argument("cdf_product: values must be weakly decreasing");
    }
  }
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  double lp = 0.0;
  for (const auto& [pos, val] : pv.pairs) lp -= log1p_alpha_qpow(la, ln_q, 2 * (val - pos) + 1);
  return LogProb(lp);
}

LogProb pmf_two_separated(const MallowsParams& p, long long i, long long k, long long x1, long long xk) {
  if (k < 2) throw std::invalid_argument("pmf_two_separated: needs k >= 2");
  if (!(x1 > xk)) throw std::invalid_argument("pmf_two_separated: needs x1 > xk");
  return LogProb(pmf_single(p, i + 1, x1).log_value + pmf_single(p, i + k, xk).log_value);
}

LogProb pmf_gap_one_increasing(const MallowsParams& p, long long x1, long long x3) {
  if (!(x1 < x3)) throw std::invalid_argument("pmf_gap_one_increasing: needs x1 < x3");
  if (p.q.q == 0.0) return (x1 == 0 && x3 == 2) ? LogProb::one() : LogProb::zero();
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  const double common = 2.0 * (std::log1p(-p.q.q) + la) + static_cast<double>(x1 + x3 - 6) * ln_q -
                        log1p_alpha_qpow(la, ln_q, 2 * x1 - 5) - log1p_alpha_qpow(la, ln_q, 2 * x1 - 3) -
                        log1p_alpha_qpow(la, ln_q, 2 * x3 - 1);
  const double log_t1 = common - log1p_alpha_qpow(la, ln_q, 2 * x3 - 3);
  const double log_t2_abs = common + std::log1p(-p.q.q * p.q.q) -
                            log1p_alpha_qpow(la, ln_q, 2 * x1 - 1) -
                            log1p_alpha_qpow(la, ln_q, 2 * x3 + 1);
  return LogProb(log_sub_exp(log_t1, log_t2_abs));
}

BlockingProb blocking_prob(const MallowsParams& p, long long i) {
  if (p.q.q == 0.0) {
    return i >= 1 ? BlockingProb{LogProb::one(), LogProb::zero()}
                  : BlockingProb{LogProb::zero(), LogProb::one()};
  }
  const double ln_q = p.q.log_q(), lai = -p.log_alpha();
  const double denom = log1p_alpha_qpow(lai, ln_q, 2 * i - 1);
  BlockingProb out;
  out.occupied = LogProb(-denom);
  out.value_leq_zero = LogProb(lai + (static_cast<double>(i) - 0.5) * ln_q - denom);
  return out;
}

namespace {

LogProb dsecond_eval(const MallowsParams& p, const std::vector<long long>& xs, double alpha_eff) {
  const long long d = static_cast<long long>(xs.size());
  if (d < 1) throw std::invalid_argument("pmf_dsecond: needs d >= 1 positions");
  for (std::size_t j = 1; j < xs.size(); ++j) {
    if (xs[j] <= xs[j - 1]) throw std::invalid_argument("pmf_dsecond: positions must be strictly increasing");
  }
  if (p.q.q == 0.0) {
    for (long long j = 0; j < d; ++j) {
      if (xs[static_cast<std::size_t>(j)] != j + 1) return LogProb::zero();
    }
    return LogProb::one();
  }
  const double ln_q = p.q.log_q(), la = std::log(alpha_eff);
  double sum_x = 0.0;
  for (long long v : xs) sum_x += static_cast<double>(v);
  double lp = static_cast<double>(d) * la +
              (sum_x - 0.5 * static_cast<double>(d) * static_cast<double>(2 * d + 1)) * ln_q;
  for (long long j = 1; j <= d; ++j) lp += std::log1p(-std::pow(p.q.q, static_cast<double>(j)));
  for (long long j = 1; j <= d; ++j) {
    const long long e = xs[static_cast<std::size_t>(j - 1)] + j - d;
    lp -= log1p_alpha_qpow(la, ln_q, 2 * e - 3) + log1p_alpha_qpow(la, ln_q, 2 * e - 1);
  }
  return LogProb(lp);
}

}  // namespace

LogProb pmf_dsecond_convention(const MallowsParams& p, const std::vector<long long>& positions,
                               bool flip_alpha) {
  return dsecond_eval(p, positions, flip_alpha ? 1.0 / p.alpha : p.alpha);
}

LogProb pmf_dsecond(const MallowsParams& p, const std::vector<long long>& positions) {
  // the oracle-adjudicated convention: the closed form holds with alpha
  // replaced by 1/alpha (the inversion map sends alpha to 1/alpha)
  return pmf_dsecond_convention(p, positions, true);
}

LogProb pmf_multiclass_convention(const MallowsParams& p, const std::vector<long long>& positions,
                                  bool flip_alpha, bool reverse_word_inv) {
  const long long d = static_cast<long long>(positions.size());
  if (d < 1) throw std::invalid_argument("pmf_multiclass: needs d >= 1 positions");
  std::vector<long long> zs = positions;
  std::sort(zs.begin(), zs.end());
  if (std::adjacent_find(zs.begin(), zs.end()) != zs.end()) {
    throw std::invalid_argument("pmf_multiclass: positions must be distinct");
  }
  if (p.q.q == 0.0) {
    for (long long j = 0; j < d; ++j) {
      if (positions[static_cast<std::size_t>(j)] != d - j) return LogProb::zero();
    }
    return LogProb::one();
  }
  const double alpha_eff = flip_alpha ? 1.0 / p.alpha : p.alpha;
  const double ln_q = p.q.log_q(), la = std::log(alpha_eff);
  long long inv = inversions(positions);
  if (reverse_word_inv) inv = d * (d - 1) / 2 - inv;
  double sum_x = 0.0;
  for (long long v : positions) sum_x += static_cast<double>(v);
  double lp = static_cast<double>(inv) * ln_q + static_cast<double>(d) * (std::log1p(-p.q.q) + la) +
              (sum_x - 0.5 * static_cast<double>(d) * static_cast<double>(2 * d + 1)) * ln_q;
  for (long long j = 1; j <= d; ++j) {
    const long long e = zs[static_cast<std::size_t>(j - 1)] + j - d;
    lp -= log1p_alpha_qpow(la, ln_q, 2 * e - 3) + log1p_alpha_qpow(la, ln_q, 2 * e - 1);
  }
  return LogProb(lp);
}

LogProb pmf_multiclass(const MallowsParams& p, const std::vector<long long>& positions) {
  // adjudicated convention: alpha -> 1/alpha and the exchange factor counts
  // the inversions of the reversed word
  return pmf_multiclass_convention(p, positions, true, true);
}

double second_class_rate_log(const MallowsParams& p, long long x, int direction) {
  if (direction != 1 && direction != -1) throw std::invalid_argument("second_class_rate: direction must be +-1");
  if (p.q.q == 0.0) {
    if (direction > 0) return x < 0 ? 0.0 : kNegInf;
    return x > 0 ? 0.0 : kNegInf;
  }
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  if (direction > 0) {
    return log1p_alpha_qpow(la, ln_q, -2 * x - 1) - log1p_alpha_qpow(la, ln_q, -2 * x - 3);
  }
  return ln_q + log1p_alpha_qpow(la, ln_q, -2 * x + 1) - log1p_alpha_qpow(la, ln_q, -2 * x + 3);
}

double second_class_rate(const MallowsParams& p, long long x, int direction) {
  return std::exp(second_class_rate_log(p, x, direction));
}

LogProb pmf_asepqm(const MallowsParams& p, long long M, long long x) {
  if (M < 1) throw std::invalid_argument("pmf_asepqm: needs M >= 1");
  if (p.q.q == 0.0) return x == -1 ? LogProb::one() : LogProb::zero();
  const double ln_q = p.q.log_q(), la = p.log_alpha();
  const double lp = std::log1p(-std::pow(p.q.q, static_cast<double>(M))) + la +
                    (static_cast<double>(x * M) + 0.5) * ln_q -
                    log1p_alpha_qpow(la, ln_q, 2 * (x + 1) * M + 1) -
                    log1p_alpha_qpow(la, ln_q, 2 * x * M + 1);
  // the closed form is the telescoped M-term block sum; keep that pinned
  double block = kNegInf;
  for (long long i = 1; i <= M; ++i) block = log_add_exp(block, pmf_single(p, 0, x * M + i).log_value);
  if (lp > -690.0 && block > -690.0 && std::abs(std::expm1(block - lp)) > 1e-11) {
    throw std::logic_error("pmf_asepqm: closed form disagrees with block sum");
  }
  return LogProb(lp);
}

AsymptoticsReport asymptotic_check(double epsilon, double alpha, const std::vector<double>& ys,
                                   long long k) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("asymptotic_check: epsilon must be positive");
  const double qv = std::exp(-epsilon);
  if (!(qv < 1.0)) throw std::invalid_argument("asymptotic_check: epsilon too small");
  const MallowsParams p{QParam(qv), alpha};

  AsymptoticsReport rep;
  for (double y : ys) {
    const long long x = static_cast<long long>(std::floor(y / epsilon));
    AsymptoticsRow row;
    row.y = y;
    row.scaled_pmf = pmf_single(p, 0, x).prob() / epsilon;
    row.logistic_density = alpha * std::exp(-y) / std::pow(1.0 + alpha * std::exp(-y), 2.0);
    row.rate_up = second_class_rate(p, x, +1);
    row.rate_down = second_class_rate(p, x, -1);
    row.rate_limit = std::exp(2.0 * y) * std::pow(1.0 + alpha * std::exp(-y), 2.0) /
                     std::pow(1.0 + alpha * std::exp(y), 2.0);
    rep.rows.push_back(row);
  }

  if (k > 0 && !ys.empty()) {
    std::vector<double> sorted(ys.begin(), ys.begin() + std::min<std::size_t>(ys.size(), static_cast<std::size_t>(k)));
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<std::pair<long long, long long>> pv;
    double limit = 1.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      pv.emplace_back(static_cast<long long>(j), static_cast<long long>(std::floor(sorted[j] / epsilon)));
      limit /= 1.0 + alpha * std::exp(-sorted[j]);
    }
    rep.cdf_scaled = cdf_product(p, PositionValuePairs::of(std::move(pv))).prob();
    rep.cdf_limit = limit;
  }
  return rep;
}

}  // namespace mallows
