#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mallows/measures.hpp"

using namespace mallows;

namespace {

// brute-force double sum of the ergodic displacement law, independent of the
// production summation order
double go_disp_brute(double q, long long c, long long d, int terms) {
  double poch[600];
  poch[0] = 1.0;
  for (int k = 1; k < 600; ++k) poch[k] = poch[k - 1] * (1.0 - std::pow(q, k));
  double inf = 1.0;
  for (int k = 1; k < 400; ++k) inf *= 1.0 - std::pow(q, k);
  double s = 0.0;
  for (long long l = 0; l < terms; ++l) {
    const long long r = d - c + l;
    if (r < 0) continue;
    s += std::pow(q, static_cast<double>(r * l + r + l)) / (poch[r] * poch[l]);
  }
  return (1.0 - q) * inf * s;
}

}  // namespace

TEST_CASE("GO displacement law: normalization, shift, brute force") {
  const QParam q(0.5);
  double s = 0.0;
  for (long long d = -40; d <= 40; ++d) s += go_pmf_displacement(q, 0, d).prob();
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));

  // depends on d - c only
  CHECK(go_pmf_displacement(q, 2, 5).log_value ==
        doctest::Approx(go_pmf_displacement(q, 0, 3).log_value).epsilon(1e-15));

  for (long long d : {-3LL, 0LL, 1LL, 4LL}) {
    CHECK(go_pmf_displacement(q, 0, d).prob() == doctest::Approx(go_disp_brute(0.5, 0, d, 20)).epsilon(1e-14));
  }
}

TEST_CASE("GO joint law: k=1 reduction and marginalization consistency") {
  const QParam q(0.5);
  for (long long d : {-2LL, 0LL, 3LL}) {
    CHECK(go_pmf_joint(q, 1, {d}).log_value == doctest::Approx(go_pmf_displacement(q, 1, d).log_value).epsilon(1e-14));
  }

  // summing the pair law over the second displacement (using the exchange
  // factor for the out-of-order part) recovers the one-point law
  const long long d1 = 1, c = 0;
  double s = 0.0;
  for (long long d2 = d1; d2 <= d1 + 40; ++d2) s += go_pmf_joint(q, c, {d1, d2}).prob();
  // d2 <= d1-2 gives a strictly decreasing value pair (d2 = d1-1 would repeat
  // a value and has probability zero); one exchange factor q after sorting
  for (long long d2 = d1 - 40; d2 <= d1 - 2; ++d2) {
    s += q.q * go_pmf_joint(q, c, {d2 + 1, d1 - 1}).prob();
  }
  CHECK(s == doctest::Approx(go_pmf_displacement(q, c, d1).prob()).epsilon(1e-8));

  // constrained-sum spot value against a direct two-free-index enumeration
  double direct = 0.0;
  {
    const double qq = 0.5;
    double poch[80];
    poch[0] = 1.0;
    for (int k = 1; k < 80; ++k) poch[k] = poch[k - 1] * (1.0 - std::pow(qq, k));
    double inf = 1.0;
    for (int k = 1; k < 200; ++k) inf *= 1.0 - std::pow(qq, k);
    // d = (0,0), c = 0: a1 in {0}, then b2 = -a1, so a1 = b2 = 0; free b1 = a2
    for (int b1 = 0; b1 < 30; ++b1) {
      for (int a2 = 0; a2 < 30; ++a2) {
        if (b1 != a2) continue;  // constraint (b1+b2) - a2 = 0
        const double e = (b1 + 1) * (0 + 1) + (b1 + 1) * (a2 + 1) + (0 + 1) * (a2 + 1);
        direct += std::pow(qq, e) / (poch[b1] * poch[0] * poch[0] * poch[a2]);
      }
    }
    direct *= std::pow(1.0 - qq, 2) * std::pow(qq, -3.0) * inf * poch[0];
  }
  CHECK(go_pmf_joint(q, 0, {0, 0}).prob() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("mixture oracle: closed forms are its sums") {
  const TruncationPolicy pol{1e-13, 4'000'000};
  {
    const MallowsParams p{QParam(0.5), 1.3};
    const auto o = oracle_mixture_pmf(p, -1, {2}, 0, pol);
    CHECK(std::abs(std::expm1(pmf_single(p, 0, 2).log_value - o.log_prob.log_value)) < 1e-10);
    CHECK(o.tail_bound < 1e-12);
  }
  {
    const MallowsParams p{QParam(0.5), 1.0};
    const auto o = oracle_mixture_pmf(p, 0, {0, 1}, 0, pol);
    CHECK(std::abs(std::expm1(pmf_neighbors(p, 0, {0, 1}).log_value - o.log_prob.log_value)) < 1e-9);
  }
  {
    // unsorted values take the exchange-factor route
    const MallowsParams p{QParam(0.5), 2.0};
    const auto o = oracle_mixture_pmf(p, 1, {3, 0, -2}, 0, pol);
    CHECK(std::abs(std::expm1(pmf_neighbors(p, 1, {3, 0, -2}).log_value - o.log_prob.log_value)) < 1e-9);
  }
  // explicit c_max too small fails loudly
  const MallowsParams p{QParam(0.9), 4.0};
  CHECK_THROWS_AS(oracle_mixture_pmf(p, 0, {0}, 2, pol), TruncationError);
}

TEST_CASE("mixture weights alone resum to 1") {
  const MallowsParams p{QParam(0.5), 1.0};
  const long long C = mixture_weight_radius(p.q, p.alpha, 1e-13);
  double s = 0.0;
  for (long long c = -C; c <= C; ++c) s += mixture_weight(c, p.q, p.alpha);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginalization oracle: no intermediates means the plain joint") {
  const MallowsParams p{QParam(0.5), 1.0};
  const auto pv = PositionValuePairs::of({{0, 4}, {1, 1}});
  const auto o = oracle_marginalized_pmf(p, pv);
  CHECK(o.log_prob.log_value == doctest::Approx(pmf_neighbors(p, -1, {4, 1}).log_value).epsilon(1e-12));
}

TEST_CASE("marginalization oracle: spec cross-checks at (0.5, 1)") {
  const MallowsParams p{QParam(0.5), 1.0};
  const TruncationPolicy pol{1e-13, 4'000'000};
  {
    const auto pv = PositionValuePairs::of({{0, 4}, {2, 1}});
    const double got = oracle_marginalized_pmf(p, pv, pol).log_prob.prob();
    CHECK(std::abs(got - pmf_decreasing(p, pv).prob()) < 1e-9);
  }
  {
    const auto pv = PositionValuePairs::of({{0, 0}, {2, 2}});
    const double got = oracle_marginalized_pmf(p, pv, pol).log_prob.prob();
    CHECK(std::abs(got - pmf_gap_one_increasing(p, 0, 2).prob()) < 1e-9);
  }
  {
    // two separated points at distance 3
    const auto pv = PositionValuePairs::of({{1, 2}, {3, 0}});
    const double got = oracle_marginalized_pmf(p, pv, pol).log_prob.prob();
    CHECK(std::abs(got - pmf_two_separated(p, 0, 3, 2, 0).prob()) < 1e-9);
  }
}

TEST_CASE("marginalization oracle: wider spans and rough parameters") {
  const TruncationPolicy pol{1e-13, 4'000'000};
  for (double qv : {0.3, 0.9}) {
    for (double alpha : {0.25, 4.0}) {
      const MallowsParams p{QParam(qv), alpha};
      const auto pv = PositionValuePairs::of({{0, 2}, {6, -1}});
      const double got = oracle_marginalized_pmf(p, pv, pol).log_prob.prob();
      CHECK(std::abs(got - pmf_two_separated(p, -1, 7, 2, -1).prob()) < 1e-9);
    }
  }
  CHECK_THROWS_AS(
      oracle_marginalized_pmf(MallowsParams{QParam(0.5), 1.0}, PositionValuePairs::of({{0, 1}, {9, 0}})),
      std::invalid_argument);
}

TEST_CASE("shift compaction: separated positions fold onto consecutive ones") {
  // P(w(i_1)=x_1, ..., w(i_k)=x_k) with decreasing values equals the law at
  // consecutive positions i_1, i_1+1, ... with values x_a - i_a + i_1 + a - 1,
  // checked purely through the marginalization oracle
  const TruncationPolicy pol{1e-13, 4'000'000};
  for (double alpha : {1.0, 2.0}) {
    const MallowsParams p{QParam(0.5), alpha};
    const auto spread = PositionValuePairs::of({{0, 3}, {4, 0}});
    const auto packed = PositionValuePairs::of({{0, 3}, {1, 0 - 4 + 0 + 1}});
    const double a = oracle_marginalized_pmf(p, spread, pol).log_prob.prob();
    const double b = oracle_marginalized_pmf(p, packed, pol).log_prob.prob();
    CHECK(std::abs(a - b) < 1e-9);

    const auto spread3 = PositionValuePairs::of({{0, 4}, {2, 2}, {5, -1}});
    const auto packed3 = PositionValuePairs::of({{0, 4}, {1, 2 - 2 + 1}, {2, -1 - 5 + 2}});
    CHECK(std::abs(oracle_marginalized_pmf(p, spread3, pol).log_prob.prob() -
                   oracle_marginalized_pmf(p, packed3, pol).log_prob.prob()) < 1e-9);
  }
}

TEST_CASE("marginalization oracle handles q = 0") {
  const MallowsParams p0{QParam(0.0), 1.0};
  CHECK(oracle_marginalized_pmf(p0, PositionValuePairs::of({{0, 0}, {2, 2}})).log_prob.prob() == 1.0);
  CHECK(oracle_marginalized_pmf(p0, PositionValuePairs::of({{0, 1}, {2, 2}})).log_prob.prob() == 0.0);
}
