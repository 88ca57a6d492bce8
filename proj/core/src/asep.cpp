#include "mallows/asep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mallows {

AsepWindowState AsepWindowState::identity(long long L) {
  AsepWindowState s;
  s.lo = -L;
  s.hi = L;
  s.labels.resize(static_cast<std::size_t>(2 * L + 1));
  std::iota(s.labels.begin(), s.labels.end(), -L);
  return s;
}

AsepWindowState AsepWindowState::from_assignment(const WindowAssignment& w) {
  AsepWindowState s;
  s.lo = w.start;
  s.hi = w.start + static_cast<long long>(w.values.size()) - 1;
  s.labels = w.values;
  return s;
}

namespace {

// Bond bookkeeping with two rate classes: decreasing pairs (rate 1) and
// increasing pairs (rate q). Equal pairs are inert.
struct BondLists {
  std::vector<int> cls;          // 0 none, 1 dec, 2 inc
  std::vector<int> where;        // index within its class list
  std::vector<int> dec, inc;

  void init(const std::vector<long long>& labels) {
    const int nb = static_cast<int>(labels.size()) - 1;
    cls.assign(static_cast<std::size_t>(nb), 0);
    where.assign(static_cast<std::size_t>(nb), -1);
    dec.clear();
    inc.clear();
    for (int b = 0; b < nb; ++b) place(b, labels);
  }

  void place(int b, const std::vector<long long>& labels) {
    const long long a = labels[static_cast<std::size_t>(b)], c = labels[static_cast<std::size_t>(b) + 1];
    const int k = a > c ? 1 : (a < c ? 2 : 0);
    cls[static_cast<std::size_t>(b)] = k;
    if (k == 1) {
      where[static_cast<std::size_t>(b)] = static_cast<int>(dec.size());
      dec.push_back(b);
    } else if (k == 2) {
      where[static_cast<std::size_t>(b)] = static_cast<int>(inc.size());
      inc.push_back(b);
    } else {
      where[static_cast<std::size_t>(b)] = -1;
    }
  }

  void remove(int b) {
    const int k = cls[static_cast<std::size_t>(b)];
    if (k == 0) return;
    auto& list = k == 1 ? dec : inc;
    const int at = where[static_cast<std::size_t>(b)];
    list[static_cast<std::size_t>(at)] = list.back();
    where[static_cast<std::size_t>(list.back())] = at;
    list.pop_back();
  }

  void refresh(int b, const std::vector<long long>& labels) {
    remove(b);
    place(b, labels);
  }
};

}  // namespace

void simulate(AsepWindowState& state, const MallowsParams& p, double t_max, SeededRng& rng,
              std::vector<JumpEvent>* trace) {
  if (t_max < 0.0) throw std::invalid_argument("simulate: t_max must be nonnegative");
  if (state.size() < 2) {
    state.clock += t_max;
    return;
  }
  const double q = p.q.q;
  BondLists bonds;
  bonds.init(state.labels);
  const double t_end = state.clock + t_max;

  while (true) {
    const double total = static_cast<double>(bonds.dec.size()) + q * static_cast<double>(bonds.inc.size());
    if (total <= 0.0) {
      state.clock = t_end;
      return;
    }
    const double dt = rng.exponential(total);
    if (state.clock + dt > t_end) {
      state.clock = t_end;
      return;
    }
    state.clock += dt;
    int b;
    bool sorting;
    if (rng.uniform01() * total < static_cast<double>(bonds.dec.size())) {
      b = bonds.dec[static_cast<std::size_t>(rng.below(bonds.dec.size()))];
      sorting = true;
    } else {
      b = bonds.inc[static_cast<std::size_t>(rng.below(bonds.inc.size()))];
      sorting = false;
    }
    std::swap(state.labels[static_cast<std::size_t>(b)], state.labels[static_cast<std::size_t>(b) + 1]);
    if (trace) trace->push_back(JumpEvent{state.clock, state.lo + b, sorting});
    for (int nb = b - 1; nb <= b + 1; ++nb) {
      if (nb >= 0 && nb + 1 < static_cast<int>(state.labels.size())) bonds.refresh(nb, state.labels);
    }
  }
}

EmpiricalDist run_step_convergence(const MallowsParams& p, long long L, double t, long long replicas,
                                   const std::vector<long long>& coords, std::uint64_t seed) {
  for (long long c : coords) {
    if (c < -L || c > L) throw std::invalid_argument("run_step_convergence: coordinate outside window");
  }
  EmpiricalDist dist;
  for (long long r = 0; r < replicas; ++r) {
    SeededRng rng(seed, static_cast<std::uint64_t>(r));
    AsepWindowState s = AsepWindowState::identity(L);
    simulate(s, p, t, rng);
    Outcome o;
    o.reserve(coords.size());
    for (long long c : coords) o.push_back(s.label(c));
    dist.add(o);
  }
  return dist;
}

SecondClassRun estimate_second_class_rates(const MallowsParams& p, long long L, double t_max,
                                           long long replicas, long long x_min, long long x_max,
                                           std::uint64_t seed, const TruncationPolicy& policy) {
  if (x_min > x_max || x_min < -L || x_max > L) {
    throw std::invalid_argument("estimate_second_class_rates: bad x range");
  }
  const double q = p.q.q;
  std::map<long long, double> occupation;
  std::map<std::pair<long long, int>, std::uint64_t> jumps;
  double total_time = 0.0;

  for (long long r = 0; r < replicas; ++r) {
    SeededRng rng(seed, static_cast<std::uint64_t>(r));
    // stationary raw window conditioned on containing the tagged value 0
    WindowAssignment w;
    bool has_zero = false;
    for (int attempt = 0; attempt < 64 && !has_zero; ++attempt) {
      w = sample_window(p, -L, 2 * L + 1, rng, policy);
      has_zero = std::find(w.values.begin(), w.values.end(), 0LL) != w.values.end();
    }
    if (!has_zero) throw std::runtime_error("estimate_second_class_rates: tagged value never sampled");
    AsepWindowState s = AsepWindowState::from_assignment(w).project_with(
        [](long long v) { return v < 0 ? 0LL : (v == 0 ? 1LL : 2LL); });

    long long tagged = s.lo + (std::find(s.labels.begin(), s.labels.end(), 1LL) - s.labels.begin());

    BondLists bonds;
    bonds.init(s.labels);
    double clock = 0.0;
    while (true) {
      const double total = static_cast<double>(bonds.dec.size()) + q * static_cast<double>(bonds.inc.size());
      double dt = total > 0.0 ? rng.exponential(total) : t_max;
      const bool last = clock + dt > t_max || total <= 0.0;
      if (last) dt = t_max - clock;
      occupation[tagged] += dt;
      clock += dt;
      if (last) break;
      int b;
      if (rng.uniform01() * total < static_cast<double>(bonds.dec.size())) {
        b = bonds.dec[static_cast<std::size_t>(rng.below(bonds.dec.size()))];
      } else {
        b = bonds.inc[static_cast<std::size_t>(rng.below(bonds.inc.size()))];
      }
      const long long left = s.lo + b;
      if (s.labels[static_cast<std::size_t>(b)] == 1) {
        jumps[{left, +1}] += 1;
        tagged = left + 1;
      } else if (s.labels[static_cast<std::size_t>(b) + 1] == 1) {
        jumps[{left + 1, -1}] += 1;
        tagged = left;
      }
      std::swap(s.labels[static_cast<std::size_t>(b)], s.labels[static_cast<std::size_t>(b) + 1]);
      for (int nb = b - 1; nb <= b + 1; ++nb) {
        if (nb >= 0 && nb + 1 < static_cast<int>(s.labels.size())) bonds.refresh(nb, s.labels);
      }
    }
    total_time += clock;
  }

  SecondClassRun out;
  out.occupation = occupation;
  out.total_time = total_time;
  for (long long x = x_min; x <= x_max; ++x) {
    for (int dir : {+1, -1}) {
      RateEstimate est;
      est.x = x;
      est.direction = dir;
      est.occupation = occupation.count(x) ? occupation[x] : 0.0;
      est.jumps = jumps.count({x, dir}) ? jumps[{x, dir}] : 0;
      if (est.occupation > 0.0 && est.jumps > 0) {
        est.rate = static_cast<double>(est.jumps) / est.occupation;
        est.stderr_ = est.rate / std::sqrt(static_cast<double>(est.jumps));
      }
      out.rates.push_back(est);
    }
  }
  return out;
}

ReversibilityReport exact_reversibility_check(long long n, QParam q) {
  if (n < 2 || n > 6) throw std::invalid_argument("exact_reversibility_check: needs 2 <= n <= 6");
  std::vector<std::vector<long long>> states;
  std::vector<long long> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    states.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const std::size_t ns = states.size();

  auto inv_count = [](const std::vector<long long>& w) {
    long long inv = 0;
    for (std::size_t a = 0; a < w.size(); ++a) {
      for (std::size_t b = a + 1; b < w.size(); ++b) {
        if (w[a] > w[b]) ++inv;
      }
    }
    return inv;
  };
  std::map<std::vector<long long>, std::size_t> index;
  for (std::size_t i = 0; i < ns; ++i) index[states[i]] = i;

  std::vector<double> pi(ns);
  double z = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    pi[i] = std::pow(q.q, static_cast<double>(inv_count(states[i])));
    z += pi[i];
  }
  for (auto& v : pi) v /= z;

  std::vector<std::vector<double>> gen(ns, std::vector<double>(ns, 0.0));
  for (std::size_t i = 0; i < ns; ++i) {
    for (long long b = 0; b + 1 < n; ++b) {
      std::vector<long long> to = states[i];
      std::swap(to[static_cast<std::size_t>(b)], to[static_cast<std::size_t>(b) + 1]);
      const double rate = states[i][static_cast<std::size_t>(b)] > states[i][static_cast<std::size_t>(b) + 1]
                              ? 1.0
                              : q.q;
      gen[i][index[to]] += rate;
    }
    double row = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      if (j != i) row += gen[i][j];
    }
    gen[i][i] = -row;
  }

  ReversibilityReport rep;
  rep.states = static_cast<long long>(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      row += gen[i][j];
      if (j != i) rep.max_db_residual = std::max(rep.max_db_residual, std::abs(pi[i] * gen[i][j] - pi[j] * gen[j][i]));
    }
    rep.max_row_sum = std::max(rep.max_row_sum, std::abs(row));
  }
  return rep;
}

long long height_function(const AsepWindowState& state, long long value_cut, long long position_cut) {
  if (state.projected) throw std::invalid_argument("height_function: raw-mode state required");
  long long count = 0;
  for (long long a = std::max(position_cut + 1, state.lo); a <= state.hi; ++a) {
    if (state.label(a) <= value_cut) ++count;
  }
  // frozen identity exterior: right side contributes positions a in (hi, value_cut]
  if (value_cut > state.hi) count += std::max(0LL, value_cut - std::max(state.hi, position_cut));
  // and, when the cut lies left of the window, positions a in (position_cut, lo)
  if (position_cut + 1 < state.lo) {
    const long long upper = std::min(state.lo - 1, value_cut);
    if (upper >= position_cut + 1) count += upper - position_cut;
  }
  return count;
}

}  // namespace mallows
