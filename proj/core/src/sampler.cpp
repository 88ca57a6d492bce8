#include "mallows/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace mallows {

namespace {

struct CondWindow {
  long long lo = 0;
  std::vector<double> weights;  // zero at already-used values
  double mass = 0.0;
};

// Conditional law of the coordinate at window offset m given the sampled
// prefix, restricted to a support window that captures mass >= 1 - tol.
CondWindow conditional_window(const MallowsParams& p, long long i0, long long m,
                              const std::vector<long long>& prefix, const TruncationPolicy& policy) {
  const double ln_q = p.q.log_q();
  const long long shift = std::llround(-p.log_alpha() / ln_q);
  const long long center = i0 + m + shift;
  const double log_prev = prefix.empty() ? 0.0 : pmf_neighbors(p, i0 - 1, prefix).log_value;

  std::vector<long long> extended = prefix;
  extended.push_back(0);
  auto weight_at = [&](long long v) -> double {
    if (std::find(prefix.begin(), prefix.end(), v) != prefix.end()) return 0.0;
    extended.back() = v;
    return std::exp(pmf_neighbors(p, i0 - 1, extended).log_value - log_prev);
  };

  // a double-precision weight sum cannot certify capture closer than ~1e-13
  const double tol = std::max(policy.tol, 5e-13);
  CondWindow w;
  long long radius = static_cast<long long>(std::ceil(std::log(tol) / ln_q)) + m + 5;
  w.lo = center - radius;
  long long hi = center + radius;
  for (long long v = w.lo; v <= hi; ++v) w.weights.push_back(weight_at(v));
  w.mass = 0.0;
  for (double x : w.weights) w.mass += x;

  while (w.mass < 1.0 - tol) {
    if (static_cast<std::int64_t>(w.weights.size()) > policy.max_terms) {
      throw TruncationError("sample_window: conditional support window exhausted max_terms");
    }
    const long long grow = 16;
    std::vector<double> front;
    for (long long v = w.lo - grow; v < w.lo; ++v) front.push_back(weight_at(v));
    w.weights.insert(w.weights.begin(), front.begin(), front.end());
    w.lo -= grow;
    for (long long v = hi + 1; v <= hi + grow; ++v) w.weights.push_back(weight_at(v));
    hi += grow;
    w.mass = 0.0;
    for (double x : w.weights) w.mass += x;
  }
  return w;
}

}  // namespace

WindowAssignment sample_window(const MallowsParams& p, long long i0, long long k, SeededRng& rng,
                               const TruncationPolicy& policy) {
  if (k < 1) throw std::invalid_argument("sample_window: needs k >= 1");
  WindowAssignment out;
  out.start = i0;
  if (p.q.q == 0.0) {
    for (long long m = 0; m < k; ++m) out.values.push_back(i0 + m);
    return out;
  }
  for (long long m = 0; m < k; ++m) {
    CondWindow w = conditional_window(p, i0, m, out.values, policy);
    const double u = rng.uniform01() * w.mass;
    double cum = 0.0;
    long long chosen = w.lo;
    bool found = false;
    for (std::size_t idx = 0; idx < w.weights.size(); ++idx) {
      cum += w.weights[idx];
      if (u < cum && w.weights[idx] > 0.0) {
        chosen = w.lo + static_cast<long long>(idx);
        found = true;
        break;
      }
    }
    if (!found) {  // roundoff at the upper edge: take the last supported value
      for (std::size_t idx = w.weights.size(); idx-- > 0;) {
        if (w.weights[idx] > 0.0) {
          chosen = w.lo + static_cast<long long>(idx);
          break;
        }
      }
    }
    out.values.push_back(chosen);
    out.tv_bound += std::max(0.0, 1.0 - w.mass);
  }
  return out;
}

EmpiricalDist empirical_distribution(const std::vector<WindowAssignment>& samples,
                                     const std::vector<long long>& coords) {
  EmpiricalDist dist;
  if (samples.empty()) return dist;
  const long long start = samples.front().start;
  const std::size_t k = samples.front().values.size();
  for (const auto& s : samples) {
    if (s.start != start || s.values.size() != k) {
      throw std::invalid_argument("empirical_distribution: samples must share start and width");
    }
    Outcome o;
    o.reserve(coords.size());
    for (long long c : coords) {
      if (c < 0 || c >= static_cast<long long>(k)) {
        throw std::invalid_argument("empirical_distribution: projection coordinate out of range");
      }
      o.push_back(s.values[static_cast<std::size_t>(c)]);
    }
    dist.add(o);
  }
  return dist;
}

namespace {

void exhaust(const MallowsParams& p, long long i0, long long k, const TruncationPolicy& policy,
             std::vector<long long>& prefix, double prob, Pmf& law) {
  if (static_cast<long long>(prefix.size()) == k) {
    law.mass[prefix] += prob;
    return;
  }
  CondWindow w = conditional_window(p, i0, static_cast<long long>(prefix.size()), prefix, policy);
  for (std::size_t idx = 0; idx < w.weights.size(); ++idx) {
    if (w.weights[idx] == 0.0) continue;
    prefix.push_back(w.lo + static_cast<long long>(idx));
    exhaust(p, i0, k, policy, prefix, prob * w.weights[idx] / w.mass, law);
    prefix.pop_back();
  }
}

}  // namespace

Pmf sampler_law_exhaustive(const MallowsParams& p, long long i0, long long k,
                           const TruncationPolicy& policy) {
  Pmf law;
  if (p.q.q == 0.0) {
    Outcome o;
    for (long long m = 0; m < k; ++m) o.push_back(i0 + m);
    law.mass[o] = 1.0;
    return law;
  }
  std::vector<long long> prefix;
  exhaust(p, i0, k, policy, prefix, 1.0, law);
  return law;
}

}  // namespace mallows
