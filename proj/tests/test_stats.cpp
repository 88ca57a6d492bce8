#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mallows/common.hpp"
#include "mallows/stats.hpp"

using namespace mallows;

namespace {

Pmf make_pmf(std::initializer_list<std::pair<long long, double>> items) {
  Pmf p;
  for (auto [k, v] : items) p.mass[scalar(k)] = v;
  return p;
}

}  // namespace

TEST_CASE("tv_distance basics") {
  const Pmf a = make_pmf({{0, 0.5}, {1, 0.5}});
  CHECK(tv_distance(a, a) == 0.0);
  const Pmf b = make_pmf({{2, 1.0}});
  CHECK(tv_distance(a, b) == doctest::Approx(1.0));
  const Pmf c = make_pmf({{0, 0.25}, {1, 0.75}});
  CHECK(tv_distance(a, c) == doctest::Approx(0.25));
}

TEST_CASE("tv_distance is a metric on random triples") {
  SeededRng rng(5, 5);
  for (int rep = 0; rep < 50; ++rep) {
    auto random_pmf = [&]() {
      Pmf p;
      double tot = 0.0;
      for (long long k = 0; k < 6; ++k) {
        const double w = rng.uniform01();
        p.mass[scalar(k)] = w;
        tot += w;
      }
      for (auto& [o, m] : p.mass) m /= tot;
      return p;
    };
    const Pmf a = random_pmf(), b = random_pmf(), c = random_pmf();
    CHECK(tv_distance(a, b) == doctest::Approx(tv_distance(b, a)).epsilon(1e-15));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-15);
  }
}

TEST_CASE("tv against a truncated tail of itself is the tail mass") {
  Pmf full, trunc;
  double tail = 0.0;
  for (long long k = 0; k < 100; ++k) {
    const double m = std::pow(0.5, k + 1);
    full.mass[scalar(k)] = m;
    if (k < 60) {
      trunc.mass[scalar(k)] = m;
    } else {
      tail += m;
    }
  }
  CHECK(tv_distance(full, trunc) == doctest::Approx(0.5 * tail).epsilon(1e-12));
}

TEST_CASE("chi-square: zero statistic on exact counts, permutation invariance") {
  const Pmf p = make_pmf({{0, 0.5}, {1, 0.25}, {2, 0.25}});
  EmpiricalDist e;
  for (int i = 0; i < 200; ++i) e.add(0);
  for (int i = 0; i < 100; ++i) e.add(1);
  for (int i = 0; i < 100; ++i) e.add(2);
  const GofResult g = chi_square_gof(e, p, 5);
  CHECK(g.statistic == doctest::Approx(0.0));

  // reordering the reference table must not change the result
  Pmf p_rev;
  for (auto it = p.mass.rbegin(); it != p.mass.rend(); ++it) p_rev.mass[it->first] = it->second;
  const GofResult g2 = chi_square_gof(e, p_rev, 5);
  CHECK(g.statistic == g2.statistic);
  CHECK(g.dof == g2.dof);
}

TEST_CASE("chi-square p-values are roughly uniform under the null") {
  const Pmf p = make_pmf({{0, 0.4}, {1, 0.3}, {2, 0.2}, {3, 0.1}});
  SeededRng rng(11, 0);
  int below = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    EmpiricalDist e;
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform01();
      e.add(u < 0.4 ? 0 : (u < 0.7 ? 1 : (u < 0.9 ? 2 : 3)));
    }
    if (chi_square_gof(e, p, 5).p_value < 0.05) ++below;
  }
  CHECK(below >= 1);
  CHECK(below <= 12);
}

TEST_CASE("chi-square has power against a shifted law") {
  const Pmf p = make_pmf({{0, 0.4}, {1, 0.3}, {2, 0.2}, {3, 0.1}});
  SeededRng rng(13, 0);
  EmpiricalDist e;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    e.add(u < 0.38 ? 0 : (u < 0.70 ? 1 : (u < 0.9 ? 2 : 3)));
  }
  CHECK(chi_square_gof(e, p, 5).p_value < 1e-6);
}

TEST_CASE("chi-square needs at least two pooled bins") {
  const Pmf p = make_pmf({{0, 1.0}});
  EmpiricalDist e;
  for (int i = 0; i < 100; ++i) e.add(0);
  CHECK_THROWS_AS(chi_square_gof(e, p, 5), std::domain_error);
}

TEST_CASE("rate_ci: arithmetic, rule of three, coverage") {
  const RateCi zero = rate_ci(0, 10.0);
  CHECK(zero.rate == 0.0);
  CHECK(zero.hi == doctest::Approx(0.3));

  const RateCi r = rate_ci(10000, 1000.0);
  CHECK(r.rate == doctest::Approx(10.0));
  CHECK(r.hi - r.rate == doctest::Approx(10.0 * 1.959963984540054 / 100.0).epsilon(1e-9));

  // synthetic exponential-clock experiments: nominal 95% coverage
  SeededRng rng(17, 17);
  const double true_rate = 2.5;
  int covered = 0;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    double occupation = 0.0;
    std::uint64_t jumps = 0;
    while (jumps < 400) {
      occupation += rng.exponential(true_rate);
      ++jumps;
    }
    const RateCi ci = rate_ci(jumps, occupation);
    if (ci.lo <= true_rate && true_rate <= ci.hi) ++covered;
  }
  CHECK(covered >= 920);
  CHECK(covered <= 980);

  CHECK_THROWS_AS(rate_ci(1, 0.0), std::invalid_argument);
}
