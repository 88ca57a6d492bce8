#include "mallows/sixvertex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mallows {

namespace {

void validate_distinct_colors(const RectDomain& d) {
  std::set<long long> seen;
  for (const auto& c : d.bottom) {
    if (c && !seen.insert(*c).second) throw std::invalid_argument("RectDomain: colors must be distinct");
  }
  for (const auto& c : d.left) {
    if (c && !seen.insert(*c).second) throw std::invalid_argument("RectDomain: colors must be distinct");
  }
}

}  // namespace

RectDomain RectDomain::standard(long long W, long long H) {
  if (W < 1 || H < 1) throw std::invalid_argument("RectDomain: needs positive width and height");
  RectDomain d;
  d.width = W;
  d.height = H;
  for (long long x = 0; x < W; ++x) d.bottom.emplace_back(x);
  for (long long y = 1; y <= H; ++y) d.left.emplace_back(-y);
  return d;
}

RectDomain RectDomain::with_boundary(long long W, long long H,
                                     std::vector<std::optional<long long>> bottom,
                                     std::vector<std::optional<long long>> left) {
  if (W < 1 || H < 1) throw std::invalid_argument("RectDomain: needs positive width and height");
  if (static_cast<long long>(bottom.size()) != W || static_cast<long long>(left.size()) != H) {
    throw std::invalid_argument("RectDomain: boundary sizes must match the rectangle");
  }
  RectDomain d;
  d.width = W;
  d.height = H;
  d.bottom = std::move(bottom);
  d.left = std::move(left);
  validate_distinct_colors(d);
  return d;
}

long long RectDomain::stochastic_vertex_bound(const VertexParams& vp) const {
  const bool b1_det = vp.b1 == 0.0 || vp.b1 == 1.0;
  const bool b2_det = vp.b2 == 0.0 || vp.b2 == 1.0;
  if (b1_det && b2_det) return 0;
  return width * height;
}

SixVertexConfig sample_lattice(const VertexParams& vp, const RectDomain& dom, SeededRng& rng) {
  SixVertexConfig cfg;
  cfg.width = dom.width;
  cfg.height = dom.height;
  std::vector<std::optional<long long>> vert = dom.bottom;
  for (long long y = 1; y <= dom.height; ++y) {
    std::optional<long long> cur = dom.left[static_cast<std::size_t>(y - 1)];
    for (long long x = 0; x < dom.width; ++x) {
      auto& below = vert[static_cast<std::size_t>(x)];
      if (below && cur) {
        const double pc = *below < *cur ? vp.b1 : vp.b2;
        if (!rng.bernoulli(pc)) std::swap(below, cur);  // turn: bottom goes right, left goes up
      }
      // otherwise at most one path: it passes straight through
    }
    if (cur) cfg.exits[*cur] = PathExit{PathExit::Side::Right, y};
  }
  for (long long x = 0; x < dom.width; ++x) {
    if (vert[static_cast<std::size_t>(x)]) {
      cfg.exits[*vert[static_cast<std::size_t>(x)]] = PathExit{PathExit::Side::Top, x};
    }
  }
  return cfg;
}

long long height_on_cut(const SixVertexConfig& cfg, const CutQuery& cut) {
  if (cut.x_enc < 0 || cut.x_enc > cfg.width) {
    throw std::invalid_argument("height_on_cut: cut bottom endpoint outside the domain");
  }
  const long long col_threshold = cfg.height + cut.y_enc + 1;
  if (col_threshold > cfg.width || cut.y_enc < -cfg.height) {
    throw std::invalid_argument("height_on_cut: cut top endpoint outside the domain");
  }
  long long count = 0;
  for (const auto& [color, exit] : cfg.exits) {
    if (color > cut.x_enc) continue;
    if (exit.side == PathExit::Side::Right || exit.coord >= col_threshold) ++count;
  }
  return count;
}

namespace {

struct Enumerator {
  const VertexParams& vp;
  const RectDomain& dom;
  const std::vector<CutQuery>& cuts;
  std::vector<std::optional<long long>> vert;
  std::map<long long, PathExit> right_exits;
  Pmf law;
  double total = 0.0;

  Enumerator(const VertexParams& vp_, const RectDomain& dom_, const std::vector<CutQuery>& cuts_)
      : vp(vp_), dom(dom_), cuts(cuts_), vert(dom_.bottom) {}

  void leaf(double prob) {
    SixVertexConfig cfg;
    cfg.width = dom.width;
    cfg.height = dom.height;
    cfg.exits = right_exits;
    for (long long x = 0; x < dom.width; ++x) {
      if (vert[static_cast<std::size_t>(x)]) {
        cfg.exits[*vert[static_cast<std::size_t>(x)]] = PathExit{PathExit::Side::Top, x};
      }
    }
    Outcome key;
    key.reserve(cuts.size());
    for (const auto& c : cuts) key.push_back(height_on_cut(cfg, c));
    law.mass[key] += prob;
    total += prob;
  }

  void run(long long y, long long x, std::optional<long long> cur, double prob) {
    if (prob == 0.0) return;
    if (y > dom.height) {
      leaf(prob);
      return;
    }
    if (x == dom.width) {
      if (cur) {
        right_exits[*cur] = PathExit{PathExit::Side::Right, y};
        run(y + 1, 0, y + 1 <= dom.height ? dom.left[static_cast<std::size_t>(y)] : std::nullopt, prob);
        right_exits.erase(*cur);
      } else {
        run(y + 1, 0, y + 1 <= dom.height ? dom.left[static_cast<std::size_t>(y)] : std::nullopt, prob);
      }
      return;
    }
    auto& below = vert[static_cast<std::size_t>(x)];
    if (below && cur) {
      const double pc = *below < *cur ? vp.b1 : vp.b2;
      const std::optional<long long> i = below, j = cur;
      if (pc > 0.0) run(y, x + 1, j, prob * pc);  // cross: i stays vertical
      if (pc < 1.0) {
        below = j;
        run(y, x + 1, i, prob * (1.0 - pc));  // turn
        below = i;
      }
    } else {
      run(y, x + 1, cur, prob);  // at most one path: straight through
    }
  }
};

}  // namespace

ExactHeightLaw enumerate_exact(const VertexParams& vp, const RectDomain& dom,
                               const std::vector<CutQuery>& cuts) {
  if (dom.stochastic_vertex_bound(vp) > 20) {
    throw std::invalid_argument("enumerate_exact: domain too large (over 20 stochastic vertices)");
  }
  Enumerator en(vp, dom, cuts);
  en.run(1, 0, dom.height >= 1 ? dom.left[0] : std::nullopt, 1.0);
  return ExactHeightLaw{std::move(en.law), en.total};
}

namespace {

std::vector<long long> calA(const SupportData& sd) {
  // integers strictly inside (A,B) and (S+C, S+D); the endpoints are
  // half-integers, so the first integer above A2/2 is (A2+1)/2
  std::vector<long long> a;
  for (long long v = (sd.A2 + 1) / 2; 2 * v < sd.B2; ++v) a.push_back(v);
  for (long long v = (2 * sd.S + sd.C2 + 1) / 2; 2 * v < 2 * sd.S + sd.D2; ++v) a.push_back(v);
  return a;
}

void validate_support_data(const SupportData& sd) {
  for (long long v : {sd.A2, sd.B2, sd.C2, sd.D2}) {
    if ((v % 2 + 2) % 2 != 1) throw std::invalid_argument("SupportData: A..D must be doubled half-integers (odd)");
  }
  if (sd.A2 > sd.B2 || sd.C2 > sd.D2) throw std::invalid_argument("SupportData: needs A <= B and C <= D");
  if (!(sd.B2 < 2 * sd.S + sd.C2)) throw std::invalid_argument("SupportData: needs B < S + C");
  if (sd.hats.size() != sd.tildes.size() || sd.hats.empty()) {
    throw std::invalid_argument("SupportData: hat/tilde families must be nonempty and equal length");
  }
  auto in_box = [&](const std::pair<long long, long long>& c) {
    return c.first >= sd.A2 && c.first <= sd.B2 && c.second >= sd.C2 && c.second <= sd.D2 &&
           (c.first % 2 + 2) % 2 == 1 && (c.second % 2 + 2) % 2 == 1;
  };
  for (const auto& c : sd.hats) {
    if (!in_box(c)) throw std::invalid_argument("SupportData: hat coordinates outside [A,B]x[C,D]");
  }
  for (const auto& c : sd.tildes) {
    if (!in_box(c)) throw std::invalid_argument("SupportData: tilde coordinates outside [A,B]x[C,D]");
  }
  const std::vector<long long> a = calA(sd);
  std::set<long long> dom_keys, images;
  for (const auto& [k, v] : sd.g) {
    dom_keys.insert(k);
    images.insert(v);
  }
  const std::set<long long> want(a.begin(), a.end());
  if (dom_keys != want || images != want) {
    throw std::invalid_argument("SupportData: g must be a bijection of calA");
  }
}

}  // namespace

SupportCheck check_support_condition(const SupportData& sd) {
  validate_support_data(sd);
  const std::vector<long long> a = calA(sd);
  SupportCheck out;
  out.ok = true;
  for (std::size_t i = 0; i < sd.hats.size(); ++i) {
    std::vector<long long> hs, ts;
    const auto [hx, hy] = sd.hats[i];
    const auto [tx, ty] = sd.tildes[i];
    for (long long v : a) {
      if (2 * v > hx && 2 * v < 2 * sd.S + hy) hs.push_back(v);
      if (2 * sd.g.at(v) > tx && 2 * sd.g.at(v) < 2 * sd.S + ty) ts.push_back(v);
    }
    std::sort(ts.begin(), ts.end());
    if (out.ok && hs != ts) {
      out.ok = false;
      out.witness = static_cast<long long>(i) + 1;
    }
    out.hat_supports.push_back(std::move(hs));
    out.tilde_supports.push_back(std::move(ts));
  }
  return out;
}

ShiftInvarianceReport verify_shift_invariance(const SupportData& sd, const VertexParams& vp,
                                              bool exact_mode, long long n_replicas, SeededRng& rng,
                                              long long extra_height) {
  const SupportCheck chk = check_support_condition(sd);
  if (!chk.ok) {
    throw std::domain_error("verify_shift_invariance: support condition fails at index " +
                            std::to_string(chk.witness));
  }
  if (sd.A2 < 1) throw std::domain_error("verify_shift_invariance: needs A >= 1/2 (translate the data)");

  const long long H = std::max<long long>(1, (sd.B2 - sd.C2) / 2 + 1) + extra_height;
  long long ymax = 0;
  for (const auto& c : sd.hats) ymax = std::max(ymax, (c.second - 1) / 2);
  for (const auto& c : sd.tildes) ymax = std::max(ymax, (c.second - 1) / 2);
  const long long W = H + ymax + 1;

  std::vector<CutQuery> cuts;
  for (const auto& [x2, y2] : sd.hats) cuts.push_back(CutQuery{(x2 - 1) / 2, (y2 - 1) / 2});
  for (const auto& [x2, y2] : sd.tildes) cuts.push_back(CutQuery{(x2 - 1) / 2, (y2 - 1) / 2});
  const std::size_t m = sd.hats.size();
  const RectDomain dom = RectDomain::standard(W, H);

  ShiftInvarianceReport rep;
  rep.domain_w = W;
  rep.domain_h = H;
  rep.exact = exact_mode;

  if (exact_mode) {
    const ExactHeightLaw full = enumerate_exact(vp, dom, cuts);
    Pmf hat_law, tilde_law;
    for (const auto& [key, mass] : full.law.mass) {
      hat_law.mass[Outcome(key.begin(), key.begin() + static_cast<long long>(m))] += mass;
      tilde_law.mass[Outcome(key.begin() + static_cast<long long>(m), key.end())] += mass;
    }
    rep.tv = tv_distance(hat_law, tilde_law);
    for (const auto& [key, mass] : hat_law.mass) {
      const auto it = tilde_law.mass.find(key);
      rep.max_dev = std::max(rep.max_dev, std::abs(mass - (it == tilde_law.mass.end() ? 0.0 : it->second)));
    }
    for (const auto& [key, mass] : tilde_law.mass) {
      if (!hat_law.mass.count(key)) rep.max_dev = std::max(rep.max_dev, mass);
    }
    return rep;
  }

  EmpiricalDist hat_emp, tilde_emp;
  std::vector<Outcome> pooled;
  for (long long r = 0; r < n_replicas; ++r) {
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    Outcome o;
    for (std::size_t i = 0; i < m; ++i) o.push_back(height_on_cut(cfg, cuts[i]));
    hat_emp.add(o);
    pooled.push_back(o);
  }
  for (long long r = 0; r < n_replicas; ++r) {
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    Outcome o;
    for (std::size_t i = 0; i < m; ++i) o.push_back(height_on_cut(cfg, cuts[m + i]));
    tilde_emp.add(o);
    pooled.push_back(o);
  }
  rep.tv = tv_distance(hat_emp, tilde_emp);

  // permutation test on the pooled vectors
  const int B = 200;
  int extreme = 0;
  std::vector<std::size_t> idx(pooled.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (int b = 0; b < B; ++b) {
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    EmpiricalDist ea, eb;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < static_cast<std::size_t>(n_replicas) ? ea : eb).add(pooled[idx[i]]);
    }
    if (tv_distance(ea, eb) >= rep.tv) ++extreme;
  }
  rep.p_value = (1.0 + extreme) / (B + 1.0);
  return rep;
}

SupportData example_support_data(long long S) {
  SupportData sd;
  sd.A2 = 1;
  sd.B2 = 5;
  sd.C2 = 5;
  sd.D2 = 9;
  sd.S = S;
  sd.hats = {{1, 9}, {5, 7}};
  sd.tildes = {{1, 9}, {3, 5}};
  sd.g = {{1, 1}, {2, S + 3}, {S + 3, 2}, {S + 4, S + 4}};
  return sd;
}

SupportData solve_support_permutation(SupportData sd) {
  sd.g.clear();
  const std::vector<long long> a = calA(sd);
  if (a.size() > 9) throw std::invalid_argument("solve_support_permutation: calA too large to search");
  const std::size_t n = a.size();

  // hat supports and tilde windows as bitmasks over calA indices
  std::vector<std::uint32_t> hat_mask(sd.hats.size(), 0), win_mask(sd.tildes.size(), 0);
  for (std::size_t i = 0; i < sd.hats.size(); ++i) {
    for (std::size_t t = 0; t < n; ++t) {
      if (2 * a[t] > sd.hats[i].first && 2 * a[t] < 2 * sd.S + sd.hats[i].second) {
        hat_mask[i] |= 1u << t;
      }
      if (2 * a[t] > sd.tildes[i].first && 2 * a[t] < 2 * sd.S + sd.tildes[i].second) {
        win_mask[i] |= 1u << t;
      }
    }
  }

  std::vector<std::size_t> image(n);
  for (std::size_t t = 0; t < n; ++t) image[t] = t;
  do {
    bool ok = true;
    for (std::size_t i = 0; ok && i < sd.hats.size(); ++i) {
      std::uint32_t mapped = 0;  // {b : g(b) in tilde window}
      for (std::size_t t = 0; t < n; ++t) {
        if (win_mask[i] & (1u << image[t])) mapped |= 1u << t;
      }
      ok = mapped == hat_mask[i];
    }
    if (ok) {
      for (std::size_t t = 0; t < n; ++t) sd.g[a[t]] = a[image[t]];
      return sd;
    }
  } while (std::next_permutation(image.begin(), image.end()));
  throw std::runtime_error("solve_support_permutation: no support-matching permutation exists");
}

SupportData make_interval_permutation_instance(const std::vector<long long>& is,
                                               const std::vector<long long>& xs, long long S) {
  const std::size_t k = is.size();
  if (k == 0 || xs.size() != k) throw std::invalid_argument("interval instance: need equal nonempty is/xs");
  for (std::size_t t = 1; t < k; ++t) {
    if (is[t] <= is[t - 1]) throw std::invalid_argument("interval instance: positions must increase");
    if (xs[t] >= xs[t - 1]) throw std::invalid_argument("interval instance: values must decrease");
  }
  if (is.front() < 1) throw std::invalid_argument("interval instance: needs i_1 >= 1");

  SupportData sd;
  sd.S = S;
  for (std::size_t d = 0; d < k; ++d) {
    const long long ih = is[d], xh = xs[d];
    const long long it = is.front() + static_cast<long long>(d);
    const long long xt = xs[d] - is[d] + it;
    sd.hats.emplace_back(2 * ih - 1, 2 * xh - 1);
    sd.hats.emplace_back(2 * ih - 1, 2 * xh + 1);
    sd.hats.emplace_back(2 * ih + 1, 2 * xh - 1);
    sd.hats.emplace_back(2 * ih + 1, 2 * xh + 1);
    sd.tildes.emplace_back(2 * it - 1, 2 * xt - 1);
    sd.tildes.emplace_back(2 * it - 1, 2 * xt + 1);
    sd.tildes.emplace_back(2 * it + 1, 2 * xt - 1);
    sd.tildes.emplace_back(2 * it + 1, 2 * xt + 1);
  }
  // the box covers both cut families (the tilde values drop below x_k when
  // the positions have gaps)
  sd.A2 = sd.B2 = sd.hats.front().first;
  sd.C2 = sd.D2 = sd.hats.front().second;
  for (const auto& fam : {sd.hats, sd.tildes}) {
    for (const auto& [x2, y2] : fam) {
      sd.A2 = std::min(sd.A2, x2);
      sd.B2 = std::max(sd.B2, x2);
      sd.C2 = std::min(sd.C2, y2);
      sd.D2 = std::max(sd.D2, y2);
    }
  }
  if (!(sd.B2 < 2 * S + sd.C2)) throw std::invalid_argument("interval instance: S too small for the box");
  return solve_support_permutation(std::move(sd));
}

SupportData random_support_instance(SeededRng& rng) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    SupportData sd;
    const long long n1 = 2 + static_cast<long long>(rng.below(2));  // positions block size
    const long long n2 = 2 + static_cast<long long>(rng.below(2));  // values block size
    sd.A2 = 1;
    sd.B2 = 2 * n1 + 1;
    sd.C2 = sd.B2 - 2 * static_cast<long long>(rng.below(2));  // keeps the lattice height at 1 or 2
    sd.D2 = sd.C2 + 2 * n2;
    sd.S = (sd.B2 - sd.C2) / 2 + 1 + static_cast<long long>(rng.below(2));

    std::vector<long long> a = calA(sd);
    for (std::size_t t = a.size(); t > 1; --t) {
      std::swap(a[t - 1], a[rng.below(t)]);
    }
    std::map<long long, long long> g;
    const std::vector<long long> sorted = calA(sd);
    for (std::size_t t = 0; t < a.size(); ++t) g[sorted[t]] = a[t];

    // candidate cuts and their supports under this g
    struct Cand {
      std::pair<long long, long long> cut;
      std::vector<long long> supp;
    };
    std::vector<Cand> hats, tildes;
    for (long long x2 = sd.A2; x2 <= sd.B2; x2 += 2) {
      for (long long y2 = sd.C2; y2 <= sd.D2; y2 += 2) {
        Cand hat{{x2, y2}, {}}, tilde{{x2, y2}, {}};
        for (long long v : sorted) {
          if (2 * v > x2 && 2 * v < 2 * sd.S + y2) hat.supp.push_back(v);
          if (2 * g.at(v) > x2 && 2 * g.at(v) < 2 * sd.S + y2) tilde.supp.push_back(v);
        }
        std::sort(tilde.supp.begin(), tilde.supp.end());
        hats.push_back(std::move(hat));
        tildes.push_back(std::move(tilde));
      }
    }
    // assemble two cut pairs with matching supports, at least one nontrivial
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    for (std::size_t h = 0; h < hats.size(); ++h) {
      for (std::size_t t = 0; t < tildes.size(); ++t) {
        if (hats[h].supp == tildes[t].supp) matches.emplace_back(h, t);
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> nontrivial;
    for (const auto& m : matches) {
      if (hats[m.first].cut != tildes[m.second].cut) nontrivial.push_back(m);
    }
    if (nontrivial.empty() || matches.size() < 2) continue;
    const auto first = nontrivial[rng.below(nontrivial.size())];
    const auto second = matches[rng.below(matches.size())];
    sd.hats = {hats[first.first].cut, hats[second.first].cut};
    sd.tildes = {tildes[first.second].cut, tildes[second.second].cut};
    sd.g = g;
    if (check_support_condition(sd).ok) return sd;
  }
  throw std::runtime_error("random_support_instance: generation failed");
}

}  // namespace mallows
