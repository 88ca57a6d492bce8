#include "mallows/asep_qm.hpp"

#include <algorithm>
#include <cmath>

namespace mallows {

long long AsepQMState::second_site() const {
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    if (seconds[i]) return static_cast<long long>(i) - L;
  }
  throw std::logic_error("AsepQMState: no second-class particle");
}

void AsepQMState::validate() const {
  long long nsec = 0;
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    if (firsts[i] < 0 || seconds[i] < 0 || seconds[i] > 1 || firsts[i] + seconds[i] > M) {
      throw std::logic_error("AsepQMState: site capacity violated");
    }
    nsec += seconds[i];
  }
  if (nsec != 1) throw std::logic_error("AsepQMState: needs exactly one second-class particle");
}

double asepqm_rate(QParam qp, long long M, int line, long long n1, long long n2) {
  const double q = qp.q;
  const double qM = std::pow(q, static_cast<double>(M));
  const double D = (1.0 - qM) * (1.0 - qM);
  auto qp_ = [&](long long e) { return std::pow(q, static_cast<double>(e)); };
  switch (line) {
    case 1: return (1.0 - qp_(n1)) * (1.0 - qp_(M - n2)) / D;
    case 2: return (1.0 - q) * qp_(n1) * (1.0 - qp_(M - n2)) / D;
    case 3: return (qp_(n1 + 1) - qM) * (qp_(M - n2) - qM) * q / D;
    case 4: return (1.0 - q) * qp_(n1) * (qp_(M - n2) - qM) * q / D;
    case 5: return (1.0 - qp_(n1)) * (1.0 - qp_(M - n2 - 1)) / D;
    // lines 6 and 8 carry one factor of q less than the printed table; that is
    // what detailed balance against the fused blocking measure requires, and
    // what reduces to the two-species rates (1, q, 1, q) at M = 1
    case 6: return (1.0 - qp_(n1)) * (1.0 - q) * qp_(M - n2 - 1) / D;
    case 7: return (qp_(n1) - qM) * (qp_(M - n2) - qM) * q / D;
    case 8: return (qp_(n1) - qM) * (1.0 - q) * qp_(M - n2) / D;
    default: throw std::invalid_argument("asepqm_rate: line must be 1..8");
  }
}

double asepqm_plain_rate(QParam qp, long long M, long long n1, long long n2, bool rightward) {
  const double q = qp.q;
  const double qM = std::pow(q, static_cast<double>(M));
  const double D = (1.0 - qM) * (1.0 - qM);
  if (rightward) {
    return (1.0 - std::pow(q, static_cast<double>(n1))) * (1.0 - std::pow(q, static_cast<double>(M - n2))) / D;
  }
  return q * (std::pow(q, static_cast<double>(n1)) - qM) * (std::pow(q, static_cast<double>(M - n2)) - qM) / D;
}

namespace {

struct Move {
  int line;  // 1..8 table lines, 9 plain right, 10 plain left
  double rate;
};

// All admissible moves across the bond (site y, site y+1).
void bond_moves(QParam q, long long M, int n1, int b1, int n2, int b2, std::vector<Move>& out) {
  out.clear();
  auto push = [&](int line, double rate) {
    if (rate > 0.0) out.push_back(Move{line, rate});
  };
  if (b1 == 1) {
    push(1, asepqm_rate(q, M, 1, n1, n2));
    push(2, asepqm_rate(q, M, 2, n1, n2));
    push(3, asepqm_rate(q, M, 3, n1, n2));
    push(4, asepqm_rate(q, M, 4, n1, n2));
  } else if (b2 == 1) {
    push(5, asepqm_rate(q, M, 5, n1, n2));
    push(6, asepqm_rate(q, M, 6, n1, n2));
    push(7, asepqm_rate(q, M, 7, n1, n2));
    push(8, asepqm_rate(q, M, 8, n1, n2));
  } else {
    push(9, asepqm_plain_rate(q, M, n1, n2, true));
    push(10, asepqm_plain_rate(q, M, n1, n2, false));
  }
}

void apply_move(AsepQMState& s, long long y, int line) {
  const std::size_t i1 = static_cast<std::size_t>(y + s.L), i2 = i1 + 1;
  switch (line) {
    case 1: s.firsts[i1] -= 1; s.firsts[i2] += 1; break;
    case 2: s.seconds[i1] = 0; s.seconds[i2] = 1; break;
    case 3: s.firsts[i1] += 1; s.firsts[i2] -= 1; break;
    case 4: s.firsts[i1] += 1; s.seconds[i1] = 0; s.firsts[i2] -= 1; s.seconds[i2] = 1; break;
    case 5: s.firsts[i1] -= 1; s.firsts[i2] += 1; break;
    case 6: s.firsts[i1] -= 1; s.seconds[i1] = 1; s.firsts[i2] += 1; s.seconds[i2] = 0; break;
    case 7: s.firsts[i1] += 1; s.firsts[i2] -= 1; break;
    case 8: s.seconds[i1] = 1; s.seconds[i2] = 0; break;
    case 9: s.firsts[i1] -= 1; s.firsts[i2] += 1; break;
    case 10: s.firsts[i1] += 1; s.firsts[i2] -= 1; break;
    default: throw std::logic_error("apply_move: bad line");
  }
}

}  // namespace

AsepQMRun simulate_asepqm(const MallowsParams& p, long long M, long long L, double t_max,
                          double burn_in, SeededRng& rng, const TruncationPolicy& policy) {
  if (M < 1) throw std::invalid_argument("simulate_asepqm: needs M >= 1");
  if (!(burn_in >= 0.0 && burn_in < t_max)) throw std::invalid_argument("simulate_asepqm: needs 0 <= burn_in < t_max");

  // fused stationary initialization: omega-window covering blocks -L..L,
  // conditioned on containing the tagged value 0
  const long long k = (2 * L + 1) * M;
  const long long w_start = -L * M + 1;
  WindowAssignment w;
  bool has_zero = false;
  for (int attempt = 0; attempt < 64 && !has_zero; ++attempt) {
    w = sample_window(p, w_start, k, rng, policy);
    has_zero = std::find(w.values.begin(), w.values.end(), 0LL) != w.values.end();
  }
  if (!has_zero) throw std::runtime_error("simulate_asepqm: tagged value never sampled");

  AsepQMState s;
  s.L = L;
  s.M = M;
  s.firsts.assign(static_cast<std::size_t>(2 * L + 1), 0);
  s.seconds.assign(static_cast<std::size_t>(2 * L + 1), 0);
  for (long long j = 0; j < k; ++j) {
    const long long v = w.values[static_cast<std::size_t>(j)];
    // omega-position w_start+j lies in block floor((pos-1)/M)
    const long long pos = w_start + j;
    const long long site = (pos - 1 >= 0) ? (pos - 1) / M : -(((-(pos - 1)) + M - 1) / M);
    const std::size_t idx = static_cast<std::size_t>(site + L);
    if (v > 0) {
      s.firsts[idx] += 1;
    } else if (v == 0) {
      s.seconds[idx] = 1;
    }
  }
  s.validate();

  const long long nb = 2 * L;  // bonds between adjacent interior sites
  std::vector<std::vector<Move>> moves(static_cast<std::size_t>(nb));
  std::vector<double> bond_rate(static_cast<std::size_t>(nb), 0.0);
  auto refresh = [&](long long b) {
    const std::size_t i1 = static_cast<std::size_t>(b), i2 = i1 + 1;
    bond_moves(p.q, M, s.firsts[i1], s.seconds[i1], s.firsts[i2], s.seconds[i2], moves[static_cast<std::size_t>(b)]);
    double r = 0.0;
    for (const auto& m : moves[static_cast<std::size_t>(b)]) r += m.rate;
    bond_rate[static_cast<std::size_t>(b)] = r;
  };
  for (long long b = 0; b < nb; ++b) refresh(b);

  AsepQMRun run;
  long long tagged = s.second_site();
  double clock = 0.0;
  while (true) {
    double total = 0.0;
    for (long long b = 0; b < nb; ++b) total += bond_rate[static_cast<std::size_t>(b)];
    double dt = total > 0.0 ? rng.exponential(total) : (t_max - clock);
    const bool last = total <= 0.0 || clock + dt > t_max;
    if (last) dt = t_max - clock;
    const double a = std::max(clock, burn_in), b_end = clock + dt;
    if (b_end > a) run.occupation[tagged] += b_end - a;
    clock = b_end;
    if (last) break;

    double u = rng.uniform01() * total;
    long long b = 0;
    while (b + 1 < nb && u >= bond_rate[static_cast<std::size_t>(b)]) {
      u -= bond_rate[static_cast<std::size_t>(b)];
      ++b;
    }
    const auto& mv = moves[static_cast<std::size_t>(b)];
    if (mv.empty()) continue;  // roundoff steered the draw onto an inert bond
    std::size_t mi = 0;
    while (mi + 1 < mv.size() && u >= mv[mi].rate) {
      u -= mv[mi].rate;
      ++mi;
    }
    const int line = mv[mi].line;
    apply_move(s, b - L, line);
    if (clock >= burn_in) {
      if (line == 2 || line == 4) run.tagged_jumps[{b - L, +1}] += 1;
      if (line == 6 || line == 8) run.tagged_jumps[{b - L + 1, -1}] += 1;
    }
    tagged = s.second_site();
    for (long long nbb = b - 1; nbb <= b + 1; ++nbb) {
      if (nbb >= 0 && nbb < nb) refresh(nbb);
    }
  }
  s.clock = clock;
  s.validate();

  run.averaged_time = t_max - burn_in;
  for (const auto& [site, dur] : run.occupation) {
    run.site_law.mass[scalar(site)] = dur / run.averaged_time;
  }
  run.final_state = s;
  return run;
}

}  // namespace mallows
