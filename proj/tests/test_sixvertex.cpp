#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mallows/asep.hpp"
#include "mallows/sixvertex.hpp"

using namespace mallows;

TEST_CASE("degenerate vertex probabilities give point-mass laws") {
  for (double b : {0.0, 1.0}) {
    const VertexParams vp{b, b};
    const RectDomain dom = RectDomain::standard(4, 3);
    const std::vector<CutQuery> cuts{{1, -1}, {2, 0}};
    const ExactHeightLaw law = enumerate_exact(vp, dom, cuts);
    CHECK(law.law.mass.size() == 1);
    CHECK(law.total_mass == doctest::Approx(1.0));
    SeededRng rng(1, 0);
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    Outcome o{height_on_cut(cfg, cuts[0]), height_on_cut(cfg, cuts[1])};
    CHECK(law.law.mass.count(o) == 1);
  }
}

TEST_CASE("single-vertex crossing frequencies match b1 and b2") {
  // standard colors: bottom 0 enters against left -1, so the b2 branch fires
  {
    const VertexParams vp{0.9, 0.4};
    const RectDomain dom = RectDomain::standard(1, 1);
    SeededRng rng(2, 0);
    long long crossings = 0;
    const long long n = 100000;
    for (long long i = 0; i < n; ++i) {
      const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
      // crossing: color 0 keeps going up and exits the top
      crossings += cfg.exits.at(0).side == PathExit::Side::Top ? 1 : 0;
    }
    const double freq = static_cast<double>(crossings) / static_cast<double>(n);
    CHECK(std::abs(freq - 0.4) <= 3.0 * std::sqrt(0.4 * 0.6 / static_cast<double>(n)));
  }
  // custom boundary with bottom color below the left color exercises b1
  {
    const VertexParams vp{0.4, 0.9};
    const RectDomain dom = RectDomain::with_boundary(1, 1, {std::optional<long long>(0)},
                                                     {std::optional<long long>(5)});
    SeededRng rng(3, 0);
    long long crossings = 0;
    const long long n = 100000;
    for (long long i = 0; i < n; ++i) {
      const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
      crossings += cfg.exits.at(0).side == PathExit::Side::Top ? 1 : 0;
    }
    const double freq = static_cast<double>(crossings) / static_cast<double>(n);
    CHECK(std::abs(freq - 0.4) <= 3.0 * std::sqrt(0.4 * 0.6 / static_cast<double>(n)));
  }
}

TEST_CASE("heights: empty boundary, right-edge exits, telescoping in the color cut") {
  const VertexParams vp{0.5, 0.25};
  {
    const RectDomain dom = RectDomain::with_boundary(2, 2, {std::nullopt, std::nullopt},
                                                     {std::nullopt, std::nullopt});
    SeededRng rng(4, 0);
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    CHECK(height_on_cut(cfg, CutQuery{0, -1}) == 0);
  }
  {
    // one left-entering path, no verticals: it must exit right and count
    const RectDomain dom = RectDomain::with_boundary(2, 2, {std::nullopt, std::nullopt},
                                                     {std::optional<long long>(-1), std::nullopt});
    SeededRng rng(5, 0);
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    CHECK(cfg.exits.at(-1).side == PathExit::Side::Right);
    CHECK(height_on_cut(cfg, CutQuery{0, -1}) == 1);
  }
  {
    // threshold counts telescope and are monotone in the color cut
    const RectDomain dom = RectDomain::standard(6, 2);
    SeededRng rng(6, 0);
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    long long prev = 0;
    long long jumps_total = 0;
    for (long long X = 0; X <= 5; ++X) {
      const long long h = height_on_cut(cfg, CutQuery{X, 1});
      CHECK(h >= prev);
      jumps_total += h - prev;
      prev = h;
    }
    CHECK(jumps_total == prev);  // partition over unit color classes adds up
  }
  {
    const RectDomain dom = RectDomain::standard(4, 2);
    SeededRng rng(7, 0);
    const SixVertexConfig cfg = sample_lattice(vp, dom, rng);
    CHECK_THROWS_AS(height_on_cut(cfg, CutQuery{-1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(height_on_cut(cfg, CutQuery{0, 3}), std::invalid_argument);
  }
}

TEST_CASE("exact enumeration is a partition of unity") {
  for (auto [b1, b2] : std::vector<std::pair<double, double>>{{0.5, 0.25}, {0.8, 0.1}, {0.3, 0.3}}) {
    const VertexParams vp{b1, b2};
    for (auto [w, h] : std::vector<std::pair<long long, long long>>{{2, 2}, {3, 3}, {4, 3}, {4, 4}}) {
      const ExactHeightLaw law = enumerate_exact(vp, RectDomain::standard(w, h), {{0, -h}});
      CHECK(law.total_mass == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(enumerate_exact(VertexParams{0.5, 0.2}, RectDomain::standard(7, 3), {}),
                  std::invalid_argument);
}

TEST_CASE("sampling agrees with the exact law on a tiny domain") {
  const VertexParams vp{0.6, 0.3};
  const RectDomain dom = RectDomain::standard(4, 2);
  const std::vector<CutQuery> cuts{{1, 0}};
  const ExactHeightLaw law = enumerate_exact(vp, dom, cuts);
  SeededRng rng(8, 0);
  EmpiricalDist emp;
  for (int i = 0; i < 40000; ++i) {
    emp.add(height_on_cut(sample_lattice(vp, dom, rng), cuts[0]));
  }
  CHECK(tv_distance(emp, law.law) < 0.01);
}

TEST_CASE("support checker reproduces the worked example") {
  const SupportData ex = example_support_data();
  const SupportCheck chk = check_support_condition(ex);
  CHECK(chk.ok);
  CHECK(chk.hat_supports[0] == std::vector<long long>{1, 2, 5, 6});
  CHECK(chk.hat_supports[1] == std::vector<long long>{5});
  CHECK(chk.tilde_supports[0] == std::vector<long long>{1, 2, 5, 6});
  CHECK(chk.tilde_supports[1] == std::vector<long long>{5});

  // the verdict does not depend on the choice of S
  for (long long S : {3LL, 5LL}) {
    CHECK(check_support_condition(example_support_data(S)).ok);
  }

  SupportData broken = ex;
  broken.tildes[1].second += 2;
  const SupportCheck bad = check_support_condition(broken);
  CHECK_FALSE(bad.ok);
  CHECK(bad.witness == 2);

  SupportData malformed = ex;
  malformed.g = {{1, 1}, {2, 2}, {5, 5}, {6, 7}};  // 7 is not in calA
  CHECK_THROWS_AS(check_support_condition(malformed), std::invalid_argument);
}

TEST_CASE("identity data is trivially shift invariant") {
  SupportData sd = example_support_data();
  sd.tildes = sd.hats;
  std::map<long long, long long> id;
  for (long long v : {1LL, 2LL, 5LL, 6LL}) id[v] = v;
  sd.g = id;
  CHECK(check_support_condition(sd).ok);
  SeededRng rng(9, 0);
  const auto rep = verify_shift_invariance(sd, VertexParams{0.4, 0.2}, true, 0, rng);
  CHECK(rep.max_dev == 0.0);
}

TEST_CASE("worked example: exact equality of the two height laws") {
  const SupportData ex = example_support_data();
  SeededRng rng(10, 0);
  for (const VertexParams vp : {VertexParams{0.4, 0.2}, VertexParams{0.7, 0.35}}) {
    const auto rep = verify_shift_invariance(ex, vp, true, 0, rng);
    CHECK(rep.max_dev <= 1e-12);
    const auto rep2 = verify_shift_invariance(ex, vp, true, 0, rng, 1);
    CHECK(rep2.max_dev <= 1e-12);
    CHECK(rep2.domain_h == rep.domain_h + 1);
  }
}

TEST_CASE("interval-permutation instances satisfy the condition and the law identity") {
  // consecutive positions: a small lattice, exact enumeration
  const auto sd = make_interval_permutation_instance({1, 2}, {3, 2}, 3);
  CHECK(check_support_condition(sd).ok);
  SeededRng rng(11, 0);
  const auto rep = verify_shift_invariance(sd, VertexParams{0.5, 0.2}, true, 0, rng);
  CHECK(rep.max_dev <= 1e-12);

  // a gapped instance carries a genuinely nontrivial permutation; its lattice
  // is too large for the exact enumerator, so sample instead
  const auto gapped = make_interval_permutation_instance({1, 3}, {4, 3}, 4);
  CHECK(check_support_condition(gapped).ok);
  bool nontrivial = false;
  for (const auto& [a, b] : gapped.g) nontrivial = nontrivial || a != b;
  CHECK(nontrivial);
  const auto mc = verify_shift_invariance(gapped, VertexParams{0.4, 0.2}, false, 3000, rng);
  CHECK(mc.tv < 0.15);
  CHECK(mc.p_value > 0.005);

  // a non-support-preserving perturbation must be refused
  SupportData broken = sd;
  broken.tildes[2].second += 2;
  if (!check_support_condition(broken).ok) {
    CHECK_THROWS_AS(verify_shift_invariance(broken, VertexParams{0.5, 0.2}, true, 0, rng),
                    std::domain_error);
  }
}

TEST_CASE("random support instances are valid and exactly shift invariant") {
  SeededRng rng(21, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const auto sd = random_support_instance(rng);
    CHECK(check_support_condition(sd).ok);
    const auto r = verify_shift_invariance(sd, VertexParams{0.45, 0.2}, true, 0, rng);
    CHECK(r.max_dev <= 1e-12);
    CHECK(r.domain_w * r.domain_h <= 20);
  }
}

TEST_CASE("Monte Carlo mode agrees on the worked example") {
  const SupportData ex = example_support_data();
  SeededRng rng(12, 0);
  const auto rep = verify_shift_invariance(ex, VertexParams{0.4, 0.2}, false, 4000, rng);
  CHECK(rep.tv < 0.05);
  CHECK(rep.p_value > 0.005);
}

TEST_CASE("six-vertex heights drift toward the continuous-time heights") {
  const double qv = 0.5, t = 1.0, eps = 0.1;
  const long long T = static_cast<long long>(t / eps);
  const MallowsParams p{QParam(qv), 1.0};

  EmpiricalDist ref;
  for (int rep = 0; rep < 20000; ++rep) {
    SeededRng rng(13, static_cast<std::uint64_t>(rep));
    AsepWindowState s = AsepWindowState::identity(10);
    simulate(s, p, t, rng);
    ref.add(height_function(s, 0, 0));
  }
  EmpiricalDist six;
  SeededRng rng(14, 0);
  const RectDomain dom = RectDomain::standard(2 * T, T);
  for (int rep = 0; rep < 20000; ++rep) {
    six.add(height_on_cut(sample_lattice(VertexParams{eps, qv * eps}, dom, rng), CutQuery{0, 0}));
  }
  CHECK(tv_distance(six, ref) < 0.08);
}
