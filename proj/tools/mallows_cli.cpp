// Command-line front end: closed-form evaluation, exact sampling, event-driven
// simulation, six-vertex verification, and the acceptance suite.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mallows/asep.hpp"
#include "mallows/asep_qm.hpp"
#include "mallows/measures.hpp"
#include "mallows/qseries.hpp"
#include "mallows/sampler.hpp"
#include "mallows/sixvertex.hpp"
#include "mallows/stats.hpp"
#include "mallows/verify.hpp"

using nlohmann::json;
using namespace mallows;

namespace {

constexpr int kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitInternal = 3;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MALLOWS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

std::vector<std::pair<long long, long long>> parse_pairs(const std::string& s) {
  std::vector<std::pair<long long, long long>> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--pairs expects i:x,i:x,...");
    out.emplace_back(std::stoll(tok.substr(0, colon)), std::stoll(tok.substr(colon + 1)));
  }
  return out;
}

std::vector<long long> parse_ints(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Replica-parallel map: deterministic because each replica owns stream r and
// partial results merge in replica order.
template <typename RepOut, typename PerReplica, typename Merge>
void run_replicas(long long replicas, int threads, PerReplica&& per, Merge&& merge) {
  const int nt = static_cast<int>(std::max<long long>(1, std::min<long long>(threads, replicas)));
  std::vector<std::thread> pool;
  std::vector<std::vector<std::pair<long long, RepOut>>> partial(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      for (long long r = t; r < replicas; r += nt) {
        partial[static_cast<std::size_t>(t)].emplace_back(r, per(r));
      }
    });
  }
  for (auto& th : pool) th.join();
  std::vector<std::pair<long long, RepOut>> all;
  for (auto& v : partial) {
    for (auto& item : v) all.push_back(std::move(item));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [r, res] : all) merge(r, res);
}

struct EvalFlags {
  std::string op;
  double q = 0.5, alpha = 1.0, tol = 1e-14;
  long long i = 0, k = 2, x1 = 0, xk = 0, x3 = 0, M = 1, x = 0, c = 0, cmax = 0, b = 0;
  int direction = 1;
  std::string pairs, values, positions, d, identity;
};

json eval_dispatch(const EvalFlags& f) {
  const MallowsParams p{QParam(f.q), f.alpha};
  const TruncationPolicy pol{f.tol, 4'000'000};
  LogProb lp;
  double tail = 0.0;
  json extra;
  if (f.op == "pmf_single") {
    const auto pv = parse_pairs(f.pairs);
    if (pv.size() != 1) throw CLI::ValidationError("pmf_single expects exactly one --pairs entry");
    lp = pmf_single(p, pv[0].first, pv[0].second);
  } else if (f.op == "pmf_neighbors") {
    lp = pmf_neighbors(p, f.i, parse_ints(f.values));
  } else if (f.op == "pmf_decreasing") {
    lp = pmf_decreasing(p, PositionValuePairs::of(parse_pairs(f.pairs)));
  } else if (f.op == "cdf_product") {
    lp = cdf_product(p, PositionValuePairs::of(parse_pairs(f.pairs)));
  } else if (f.op == "pmf_two_separated") {
    lp = pmf_two_separated(p, f.i, f.k, f.x1, f.xk);
  } else if (f.op == "pmf_gap_one_increasing") {
    lp = pmf_gap_one_increasing(p, f.x1, f.x3);
  } else if (f.op == "go_pmf_displacement") {
    lp = go_pmf_displacement(p.q, f.c, parse_ints(f.d).at(0), pol);
  } else if (f.op == "go_pmf_joint") {
    lp = go_pmf_joint(p.q, f.c, parse_ints(f.d), pol);
  } else if (f.op == "oracle_mixture_pmf") {
    const auto res = oracle_mixture_pmf(p, f.i, parse_ints(f.values), f.cmax, pol);
    lp = res.log_prob;
    tail = res.tail_bound;
  } else if (f.op == "oracle_marginalized_pmf") {
    const auto res = oracle_marginalized_pmf(p, PositionValuePairs::of(parse_pairs(f.pairs)), pol);
    lp = res.log_prob;
    tail = res.tail_bound;
  } else if (f.op == "blocking_prob") {
    const auto bp = blocking_prob(p, f.i);
    lp = bp.occupied;
    extra["value_leq_zero_prob"] = fmt17(bp.value_leq_zero.prob());
  } else if (f.op == "pmf_dsecond") {
    lp = pmf_dsecond(p, parse_ints(f.positions));
  } else if (f.op == "pmf_multiclass") {
    lp = pmf_multiclass(p, parse_ints(f.positions));
  } else if (f.op == "second_class_rate") {
    lp = LogProb(second_class_rate_log(p, f.x, f.direction));
  } else if (f.op == "pmf_asepqm") {
    lp = pmf_asepqm(p, f.M, f.x);
  } else if (f.op == "verify_identity") {
    IdentityInputs in;
    in.alpha = f.alpha;
    in.z = f.alpha;
    in.x_real = f.alpha;
    in.n = f.k;
    in.x = f.x1;
    in.x1 = f.x1;
    in.i = f.i;
    in.b = f.b;
    in.k = f.k;
    if (!f.values.empty()) in.xs = parse_ints(f.values);
    extra["relative_error"] = fmt17(verify_identity(f.identity, in, p.q, pol));
    lp = LogProb::one();
  } else {
    throw CLI::ValidationError("unknown --op '" + f.op + "'");
  }
  json out;
  out["op"] = f.op;
  out["params"]["q"] = fmt17(f.q);
  out["params"]["alpha"] = fmt17(f.alpha);
  out["params"]["tol"] = fmt17(f.tol);
  out["log_prob"] = fmt17(lp.log_value);
  out["prob"] = fmt17(lp.prob());
  out["tail_bound"] = fmt17(tail);
  for (auto& [key, v] : extra.items()) out[key] = v;
  return out;
}

SupportData support_from_json(const json& j) {
  SupportData sd;
  sd.A2 = j.at("A").get<long long>();
  sd.B2 = j.at("B").get<long long>();
  sd.C2 = j.at("C").get<long long>();
  sd.D2 = j.at("D").get<long long>();
  sd.S = j.at("S").get<long long>();
  for (const auto& c : j.at("hats")) sd.hats.emplace_back(c.at(0).get<long long>(), c.at(1).get<long long>());
  for (const auto& c : j.at("tildes")) sd.tildes.emplace_back(c.at(0).get<long long>(), c.at(1).get<long long>());
  for (const auto& [key, val] : j.at("g").items()) sd.g[std::stoll(key)] = val.get<long long>();
  return sd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mallows product measure toolkit: closed forms, oracles, samplers, simulators"};
  app.require_subcommand(1);

  EvalFlags ef;
  std::string out_format = "json", out_path;
  auto* eval = app.add_subcommand("eval", "evaluate a closed form or oracle");
  eval->add_option("--op", ef.op, "operation name")->required();
  eval->add_option("--q", ef.q, "deformation parameter in [0,1)");
  eval->add_option("--alpha", ef.alpha, "mixture parameter (> 0)");
  eval->add_option("--pairs", ef.pairs, "position:value list, e.g. 0:2,3:1");
  eval->add_option("--i", ef.i, "base position");
  eval->add_option("--k", ef.k, "separation / tuple length / q-binomial n");
  eval->add_option("--x1", ef.x1, "first value");
  eval->add_option("--xk", ef.xk, "last value");
  eval->add_option("--x3", ef.x3, "gap-one second value");
  eval->add_option("--x", ef.x, "site / integer argument");
  eval->add_option("--b", ef.b, "identity parameter b");
  eval->add_option("--c", ef.c, "ergodic component index");
  eval->add_option("--d", ef.d, "displacement list, e.g. 0,1");
  eval->add_option("--cmax", ef.cmax, "mixture radius (0 = automatic)");
  eval->add_option("--values", ef.values, "value list, e.g. 2,-1,5");
  eval->add_option("--positions", ef.positions, "position list");
  eval->add_option("--identity", ef.identity, "identity name for verify_identity");
  eval->add_option("--direction", ef.direction, "+1 or -1");
  eval->add_option("--M", ef.M, "ASEP(q,M) fusion level");
  eval->add_option("--tol", ef.tol, "truncation tolerance");
  eval->add_option("--out", out_format, "json|csv");
  eval->add_option("--out-path", out_path, "write to file instead of stdout");

  double s_q = 0.5, s_alpha = 1.0, s_tol = 1e-14;
  long long s_start = 0, s_k = 1, s_n = 1;
  std::uint64_t s_seed = default_seed();
  std::string s_out = "csv", s_path;
  auto* sample = app.add_subcommand("sample", "draw exact window samples");
  sample->add_option("--q", s_q)->required();
  sample->add_option("--alpha", s_alpha);
  sample->add_option("--start", s_start, "leftmost position");
  sample->add_option("--k", s_k, "window width");
  sample->add_option("--n", s_n, "number of replicas");
  sample->add_option("--seed", s_seed);
  sample->add_option("--tol", s_tol);
  sample->add_option("--out", s_out, "csv|json");
  sample->add_option("--out-path", s_path);

  double a_q = 0.5, a_alpha = 1.0, a_t = 10.0;
  long long a_L = 10, a_reps = 1;
  std::uint64_t a_seed = default_seed();
  std::string a_mode = "raw", a_out = "csv", a_path;
  bool a_trace = false;
  int a_threads = 0;
  auto* sim = app.add_subcommand("simulate-asep", "event-driven multi-species ASEP window");
  sim->add_option("--q", a_q)->required();
  sim->add_option("--alpha", a_alpha);
  sim->add_option("--L", a_L, "window half-width");
  sim->add_option("--t", a_t, "horizon");
  sim->add_option("--replicas", a_reps);
  sim->add_option("--seed", a_seed);
  sim->add_option("--mode", a_mode, "raw|second-class|classes");
  sim->add_option("--out", a_out, "csv|json");
  sim->add_option("--out-path", a_path);
  sim->add_option("--threads", a_threads, "0 = hardware concurrency");
  sim->add_flag("--trace", a_trace, "emit the jump-event log");

  double m_q = 0.5, m_alpha = 1.0, m_t = 1000.0, m_burn = -1.0;
  long long m_M = 2, m_L = 10, m_reps = 1;
  std::uint64_t m_seed = default_seed();
  std::string m_out = "csv", m_path;
  auto* simqm = app.add_subcommand("simulate-asepqm", "ASEP(q,M) with one second-class particle");
  simqm->add_option("--q", m_q)->required();
  simqm->add_option("--alpha", m_alpha);
  simqm->add_option("--M", m_M)->required();
  simqm->add_option("--L", m_L);
  simqm->add_option("--t", m_t);
  simqm->add_option("--burn-in", m_burn, "default t/5");
  simqm->add_option("--replicas", m_reps);
  simqm->add_option("--seed", m_seed);
  simqm->add_option("--out", m_out, "csv|json");
  simqm->add_option("--out-path", m_path);

  double v_b1 = 0.5, v_b2 = 0.25;
  long long v_w = 4, v_h = 2, v_n = 1000;
  std::uint64_t v_seed = default_seed();
  std::string v_cuts, v_mode = "sample", v_support, v_out = "json", v_path;
  auto* six = app.add_subcommand("sixvertex", "stochastic colored six-vertex rectangle");
  six->add_option("--b1", v_b1);
  six->add_option("--b2", v_b2);
  six->add_option("--width", v_w);
  six->add_option("--height", v_h);
  six->add_option("--cuts", v_cuts, "cut list x:y,... (integers just below the half-integer thresholds)");
  six->add_option("--mode", v_mode, "sample|exact|verify");
  six->add_option("--support-file", v_support, "SupportData JSON for verify mode");
  six->add_option("--n", v_n, "Monte Carlo replicas (verify mode: 0 = exact)");
  six->add_option("--seed", v_seed);
  six->add_option("--out", v_out, "json|csv");
  six->add_option("--out-path", v_path);

  bool ver_quick = false;
  std::uint64_t ver_seed = 20240801;
  std::vector<int> ver_only;
  std::string ver_path;
  int ver_threads = 0;
  auto* ver = app.add_subcommand("verify", "run the full acceptance suite");
  ver->add_flag("--quick", ver_quick, "reduced Monte Carlo sizes, same checks");
  ver->add_option("--seed", ver_seed);
  ver->add_option("--only", ver_only, "criterion ids to run");
  ver->add_option("--out", ver_path, "also write a JSON report here");
  ver->add_option("--threads", ver_threads);

  double y_eps = 1e-3, y_alpha = 1.0;
  long long y_k = 0;
  std::string y_ys = "-2,-1,0,1,2", y_out = "csv", y_path;
  auto* asy = app.add_subcommand("asymptotics", "q -> 1 scaling tables");
  asy->add_option("--epsilon", y_eps);
  asy->add_option("--alpha", y_alpha);
  asy->add_option("--ys", y_ys, "comma-separated y grid");
  asy->add_option("--k", y_k, "cdf product length (0 = skip)");
  asy->add_option("--out", y_out, "csv|json");
  asy->add_option("--out-path", y_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) {
      const json res = eval_dispatch(ef);
      if (out_format == "json") {
        write_output(res.dump(2), out_path);
      } else {
        std::string csv = "op,q,alpha,log_prob,prob,tail_bound\n";
        csv += ef.op + "," + fmt17(ef.q) + "," + fmt17(ef.alpha) + "," + res["log_prob"].get<std::string>() +
               "," + res["prob"].get<std::string>() + "," + res["tail_bound"].get<std::string>() + "\n";
        write_output(csv, out_path);
      }
      return kExitOk;
    }

    if (*sample) {
      const MallowsParams p{QParam(s_q), s_alpha};
      const TruncationPolicy pol{s_tol, 4'000'000};
      std::vector<WindowAssignment> windows;
      for (long long r = 0; r < s_n; ++r) {
        SeededRng rng(s_seed, static_cast<std::uint64_t>(r));
        windows.push_back(sample_window(p, s_start, s_k, rng, pol));
      }
      if (s_out == "json") {
        json out;
        out["params"] = {{"q", fmt17(s_q)}, {"alpha", fmt17(s_alpha)}, {"start", s_start},
                         {"k", s_k},        {"n", s_n},                {"seed", s_seed}};
        json rows = json::array();
        double tv = 0.0;
        for (const auto& w : windows) {
          rows.push_back(w.values);
          tv = std::max(tv, w.tv_bound);
        }
        out["samples"] = rows;
        out["tv_bound"] = fmt17(tv);
        write_output(out.dump(2), s_path);
      } else {
        std::string csv = "replica,position,value\n";
        for (long long r = 0; r < s_n; ++r) {
          const auto& w = windows[static_cast<std::size_t>(r)];
          for (std::size_t m = 0; m < w.values.size(); ++m) {
            csv += std::to_string(r) + "," + std::to_string(w.start + static_cast<long long>(m)) + "," +
                   std::to_string(w.values[m]) + "\n";
          }
        }
        write_output(csv, s_path);
      }
      return kExitOk;
    }

    if (*sim) {
      const MallowsParams p{QParam(a_q), a_alpha};
      if (a_mode == "second-class") {
        const auto run = estimate_second_class_rates(p, a_L, a_t, a_reps, -a_L / 2, a_L / 2, a_seed);
        if (a_out == "json") {
          json rows = json::array();
          for (const auto& est : run.rates) {
            rows.push_back({{"x", est.x},
                            {"direction", est.direction},
                            {"jumps", est.jumps},
                            {"occupation", fmt17(est.occupation)},
                            {"rate", fmt17(est.rate)},
                            {"stderr", fmt17(est.stderr_)}});
          }
          write_output(json{{"rates", rows}}.dump(2), a_path);
        } else {
          std::string csv = "x,direction,jumps,occupation,rate,stderr\n";
          for (const auto& est : run.rates) {
            csv += std::to_string(est.x) + "," + std::to_string(est.direction) + "," + std::to_string(est.jumps) +
                   "," + fmt17(est.occupation) + "," + fmt17(est.rate) + "," + fmt17(est.stderr_) + "\n";
          }
          write_output(csv, a_path);
        }
        return kExitOk;
      }

      struct RepOut {
        std::vector<long long> labels;
        std::vector<JumpEvent> events;
      };
      std::string csv = a_trace ? "replica,time,bond,kind\n" : "replica,position,value\n";
      json jrows = json::array();
      run_replicas<RepOut>(
          a_reps, thread_count(a_threads),
          [&](long long r) {
            SeededRng rng(a_seed, static_cast<std::uint64_t>(r));
            AsepWindowState s = AsepWindowState::identity(a_L);
            RepOut out;
            simulate(s, p, a_t, rng, a_trace ? &out.events : nullptr);
            if (a_mode == "classes") {
              s = s.project_with([](long long v) { return v < 0 ? 0LL : (v == 0 ? 1LL : 2LL); });
            }
            out.labels = s.labels;
            return out;
          },
          [&](long long r, const RepOut& out) {
            if (a_trace) {
              for (const auto& ev : out.events) {
                csv += std::to_string(r) + "," + fmt17(ev.time) + "," + std::to_string(ev.bond) + "," +
                       (ev.sorting ? "sorting" : "anti-sorting") + "\n";
              }
            } else if (a_out == "json") {
              jrows.push_back(out.labels);
            } else {
              for (std::size_t m = 0; m < out.labels.size(); ++m) {
                csv += std::to_string(r) + "," + std::to_string(-a_L + static_cast<long long>(m)) + "," +
                       std::to_string(out.labels[m]) + "\n";
              }
            }
          });
      if (!a_trace && a_out == "json") {
        json out;
        out["params"] = {{"q", fmt17(a_q)}, {"alpha", fmt17(a_alpha)}, {"L", a_L},
                         {"t", fmt17(a_t)}, {"replicas", a_reps},      {"seed", a_seed},
                         {"mode", a_mode}};
        out["windows"] = jrows;
        write_output(out.dump(2), a_path);
      } else {
        write_output(csv, a_path);
      }
      return kExitOk;
    }

    if (*simqm) {
      const MallowsParams p{QParam(m_q), m_alpha};
      const double burn = m_burn >= 0.0 ? m_burn : m_t / 5.0;
      std::map<long long, double> occ;
      double total = 0.0;
      for (long long r = 0; r < m_reps; ++r) {
        SeededRng rng(m_seed, static_cast<std::uint64_t>(r));
        const auto run = simulate_asepqm(p, m_M, m_L, m_t, burn, rng);
        for (const auto& [site, dur] : run.occupation) occ[site] += dur;
        total += run.averaged_time;
      }
      if (m_out == "json") {
        json out;
        out["params"] = {{"q", fmt17(m_q)},  {"alpha", fmt17(m_alpha)}, {"M", m_M},
                         {"L", m_L},         {"t", fmt17(m_t)},         {"burn_in", fmt17(burn)},
                         {"replicas", m_reps}, {"seed", m_seed}};
        json law;
        for (const auto& [site, dur] : occ) law[std::to_string(site)] = fmt17(dur / total);
        out["site_law"] = law;
        write_output(out.dump(2), m_path);
      } else {
        std::string csv = "site,weight\n";
        for (const auto& [site, dur] : occ) csv += std::to_string(site) + "," + fmt17(dur / total) + "\n";
        write_output(csv, m_path);
      }
      return kExitOk;
    }

    if (*six) {
      const VertexParams vp{v_b1, v_b2};
      if (v_mode == "verify") {
        if (v_support.empty()) throw CLI::ValidationError("verify mode needs --support-file");
        std::ifstream in(v_support);
        if (!in) throw std::runtime_error("cannot open support file: " + v_support);
        json j;
        in >> j;
        const SupportData sd = support_from_json(j);
        const SupportCheck chk = check_support_condition(sd);
        json out;
        out["support_ok"] = chk.ok;
        if (!chk.ok) {
          out["witness"] = chk.witness;
          write_output(out.dump(2), v_path);
          return kExitCheckFailed;
        }
        SeededRng rng(v_seed, 0);
        const bool exact = v_n <= 0;
        const auto rep = verify_shift_invariance(sd, vp, exact, v_n, rng);
        out["mode"] = exact ? "exact" : "montecarlo";
        out["domain"] = {{"width", rep.domain_w}, {"height", rep.domain_h}};
        out["max_dev"] = fmt17(rep.max_dev);
        out["tv"] = fmt17(rep.tv);
        out["p_value"] = fmt17(rep.p_value);
        write_output(out.dump(2), v_path);
        const bool ok = exact ? rep.max_dev <= 1e-9 : rep.p_value > 1e-3;
        return ok ? kExitOk : kExitCheckFailed;
      }

      std::vector<CutQuery> cuts;
      for (const auto& [x, y] : parse_pairs(v_cuts)) cuts.push_back(CutQuery{x, y});
      const RectDomain dom = RectDomain::standard(v_w, v_h);
      if (v_mode == "exact") {
        const ExactHeightLaw law = enumerate_exact(vp, dom, cuts);
        if (v_out == "json") {
          json out;
          out["total_mass"] = fmt17(law.total_mass);
          json rows = json::array();
          for (const auto& [o, mass] : law.law.mass) {
            rows.push_back({{"heights", o}, {"prob", fmt17(mass)}});
          }
          out["law"] = rows;
          write_output(out.dump(2), v_path);
        } else {
          std::string csv = "heights,prob\n";
          for (const auto& [o, mass] : law.law.mass) {
            std::string key;
            for (std::size_t i = 0; i < o.size(); ++i) key += (i ? ";" : "") + std::to_string(o[i]);
            csv += key + "," + fmt17(mass) + "\n";
          }
          write_output(csv, v_path);
        }
        return kExitOk;
      }
      if (v_mode != "sample") throw CLI::ValidationError("unknown sixvertex --mode");
      std::string csv = "replica,cut,height\n";
      json jrows = json::array();
      SeededRng rng(v_seed, 0);
      for (long long r = 0; r < v_n; ++r) {
        const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
        json heights = json::array();
        for (std::size_t ci = 0; ci < cuts.size(); ++ci) {
          const long long h = height_on_cut(cfg, cuts[ci]);
          csv += std::to_string(r) + "," + std::to_string(ci) + "," + std::to_string(h) + "\n";
          heights.push_back(h);
        }
        jrows.push_back(heights);
      }
      if (v_out == "json") {
        write_output(json{{"heights", jrows}}.dump(2), v_path);
      } else {
        write_output(csv, v_path);
      }
      return kExitOk;
    }

    if (*ver) {
      VerifyOptions opt;
      opt.quick = ver_quick;
      opt.seed = ver_seed;
      opt.only = ver_only;
      opt.threads = ver_threads;
      const auto results = run_acceptance(opt);
      json report = json::array();
      int failures = 0;
      for (const auto& r : results) {
        std::printf("%s  criterion %2d  %-34s %s  [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        report.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail},
                          {"seconds", fmt17(r.seconds)}});
        if (!r.pass) ++failures;
      }
      if (!ver_path.empty()) write_output(json{{"criteria", report}}.dump(2), ver_path);
      return failures == 0 ? kExitOk : kExitCheckFailed;
    }

    if (*asy) {
      const AsymptoticsReport rep = asymptotic_check(y_eps, y_alpha, parse_reals(y_ys), y_k);
      if (y_out == "json") {
        json rows = json::array();
        for (const auto& row : rep.rows) {
          rows.push_back({{"y", fmt17(row.y)},
                          {"scaled_pmf", fmt17(row.scaled_pmf)},
                          {"logistic_density", fmt17(row.logistic_density)},
                          {"rate_up", fmt17(row.rate_up)},
                          {"rate_down", fmt17(row.rate_down)},
                          {"rate_limit", fmt17(row.rate_limit)}});
        }
        json out;
        out["rows"] = rows;
        out["cdf_scaled"] = fmt17(rep.cdf_scaled);
        out["cdf_limit"] = fmt17(rep.cdf_limit);
        write_output(out.dump(2), y_path);
      } else {
        std::string csv = "y,scaled_pmf,logistic_density,rate_up,rate_down,rate_limit\n";
        for (const auto& row : rep.rows) {
          csv += fmt17(row.y) + "," + fmt17(row.scaled_pmf) + "," + fmt17(row.logistic_density) + "," +
                 fmt17(row.rate_up) + "," + fmt17(row.rate_down) + "," + fmt17(row.rate_limit) + "\n";
        }
        csv += "cdf," + fmt17(rep.cdf_scaled) + "," + fmt17(rep.cdf_limit) + ",,,\n";
        write_output(csv, y_path);
      }
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
