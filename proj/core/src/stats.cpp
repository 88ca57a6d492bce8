#include "mallows/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace mallows {

double Pmf::total() const {
  double s = 0.0;
  for (const auto& [o, m] : mass) s += m;
  return s;
}

Pmf Pmf::from_log(const std::map<Outcome, double>& log_mass) {
  Pmf out;
  for (const auto& [o, lm] : log_mass) {
    if (lm == kNegInf) continue;
    out.mass[o] = std::exp(lm);
  }
  return out;
}

void EmpiricalDist::merge(const EmpiricalDist& other) {
  for (const auto& [o, c] : other.counts) counts[o] += c;
  n += other.n;
}

Pmf EmpiricalDist::to_pmf() const {
  Pmf out;
  if (n == 0) return out;
  for (const auto& [o, c] : counts) out.mass[o] = static_cast<double>(c) / static_cast<double>(n);
  return out;
}

double tv_distance(const Pmf& a, const Pmf& b) {
  double s = 0.0;
  auto ia = a.mass.begin();
  auto ib = b.mass.begin();
  while (ia != a.mass.end() || ib != b.mass.end()) {
    if (ib == b.mass.end() || (ia != a.mass.end() && ia->first < ib->first)) {
      s += std::abs(ia->second);
      ++ia;
    } else if (ia == a.mass.end() || ib->first < ia->first) {
      s += std::abs(ib->second);
      ++ib;
    } else {
      s += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * s;
}

double tv_distance(const EmpiricalDist& a, const Pmf& b) { return tv_distance(a.to_pmf(), b); }
double tv_distance(const EmpiricalDist& a, const EmpiricalDist& b) { return tv_distance(a.to_pmf(), b.to_pmf()); }

GofResult chi_square_gof(const EmpiricalDist& e, const Pmf& p, long long min_bin) {
  if (e.n == 0) throw std::invalid_argument("chi_square_gof: empty sample");
  const double n = static_cast<double>(e.n);

  // deterministic, permutation-invariant pooling: sort by expected mass
  // descending, outcome as tie-break
  std::vector<std::pair<Outcome, double>> items(p.mass.begin(), p.mass.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::pair<double, double>> pools;  // (observed, expected)
  double obs_acc = 0.0, exp_acc = 0.0, obs_used = 0.0;
  for (const auto& [o, m] : items) {
    auto it = e.counts.find(o);
    const double obs = it == e.counts.end() ? 0.0 : static_cast<double>(it->second);
    obs_acc += obs;
    obs_used += obs;
    exp_acc += n * m;
    if (exp_acc >= static_cast<double>(min_bin)) {
      pools.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  // leftover listed mass plus everything outside p's support
  const double residual_exp = exp_acc + n * std::max(0.0, 1.0 - p.total());
  const double residual_obs = obs_acc + (n - obs_used);
  if (residual_exp > 0.0 || residual_obs > 0.0) {
    if (!pools.empty() && residual_exp < static_cast<double>(min_bin)) {
      pools.back().first += residual_obs;
      pools.back().second += residual_exp;
    } else {
      pools.emplace_back(residual_obs, residual_exp);
    }
  }
  if (pools.size() < 2) throw std::domain_error("chi_square_gof: fewer than 2 pooled bins");

  double stat = 0.0;
  for (const auto& [obs, expd] : pools) {
    if (expd <= 0.0) continue;
    const double d = obs - expd;
    stat += d * d / expd;
  }
  const long long dof = static_cast<long long>(pools.size()) - 1;
  boost::math::chi_squared_distribution<double> chi2(static_cast<double>(dof));
  GofResult out;
  out.statistic = stat;
  out.dof = dof;
  out.p_value = boost::math::cdf(boost::math::complement(chi2, stat));
  return out;
}

RateCi rate_ci(std::uint64_t jumps, double occupation, double level) {
  if (!(occupation > 0.0)) throw std::invalid_argument("rate_ci: occupation must be positive");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("rate_ci: level must be in (0,1)");
  if (jumps == 0) {
    return RateCi{0.0, 0.0, 3.0 / occupation};  // rule of three
  }
  boost::math::normal_distribution<double> nd;
  const double z = boost::math::quantile(nd, 0.5 + level / 2.0);
  const double rate = static_cast<double>(jumps) / occupation;
  const double half = z / std::sqrt(static_cast<double>(jumps));
  return RateCi{rate, std::max(0.0, rate * (1.0 - half)), rate * (1.0 + half)};
}

}  // namespace mallows
