#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mallows/measures.hpp"

using namespace mallows;

namespace {
const MallowsParams kP{QParam(0.5), 1.0};
}

TEST_CASE("pmf_single: symmetry, normalization, degenerate q") {
  // P(D=x; alpha) = P(D=-x; 1/alpha), exactly in log domain
  const MallowsParams p2{QParam(0.5), 2.0};
  const MallowsParams ph{QParam(0.5), 0.5};
  CHECK(pmf_single(p2, 0, 3).log_value == doctest::Approx(pmf_single(ph, 0, -3).log_value).epsilon(1e-15));

  double s = 0.0;
  for (long long x = -40; x <= 40; ++x) s += pmf_single(kP, 0, x).prob();
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  const MallowsParams p0{QParam(0.0), 1.0};
  CHECK(pmf_single(p0, 5, 5).prob() == 1.0);
  CHECK(pmf_single(p0, 5, 6).prob() == 0.0);
}

TEST_CASE("pmf_single: inversion symmetry swaps position and value") {
  for (double alpha : {0.25, 1.0, 4.0}) {
    const MallowsParams p{QParam(0.3), alpha};
    const MallowsParams pinv{QParam(0.3), 1.0 / alpha};
    for (long long i = -3; i <= 3; ++i) {
      for (long long x = -3; x <= 3; ++x) {
        CHECK(pmf_single(p, i, x).log_value == doctest::Approx(pmf_single(pinv, x, i).log_value).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("pmf_neighbors: k=1 reduction and exchange factor") {
  for (long long x = -3; x <= 3; ++x) {
    CHECK(pmf_neighbors(kP, 2, {x}).log_value == doctest::Approx(pmf_single(kP, 3, x).log_value).epsilon(1e-15));
  }
  // swapping two adjacent values costs exactly one factor of q
  const double lq = std::log(0.5);
  CHECK(pmf_neighbors(kP, 0, {4, 1}).log_value ==
        doctest::Approx(pmf_neighbors(kP, 0, {1, 4}).log_value + lq).epsilon(1e-14));
  CHECK_THROWS_AS(pmf_neighbors(kP, 0, {2, 2}), std::invalid_argument);
}

TEST_CASE("pmf_neighbors: strictly decreasing values factorize") {
  const std::vector<long long> vals{5, 1, 0};
  double prod = 0.0;
  for (std::size_t j = 0; j < vals.size(); ++j) {
    prod += pmf_single(kP, static_cast<long long>(j) + 1, vals[j]).log_value;
  }
  CHECK(pmf_neighbors(kP, 0, vals).log_value == doctest::Approx(prod).epsilon(1e-13));
}

TEST_CASE("pmf_neighbors: translation invariance is exact") {
  const MallowsParams p{QParam(0.7), 0.8};
  const std::vector<long long> vals{2, -1, 5};
  for (long long s = -5; s <= 5; ++s) {
    std::vector<long long> shifted;
    for (long long v : vals) shifted.push_back(v + s);
    CHECK(pmf_neighbors(p, 0, vals).log_value ==
          doctest::Approx(pmf_neighbors(p, s, shifted).log_value).epsilon(1e-14));
  }
}

TEST_CASE("pmf_decreasing: validation, reduction, shift invariance") {
  CHECK_THROWS_AS(pmf_decreasing(kP, PositionValuePairs::of({{0, 1}, {2, 3}})), std::invalid_argument);
  const auto pv = PositionValuePairs::of({{1, 4}, {3, 1}});
  CHECK(pmf_decreasing(kP, pv).log_value ==
        doctest::Approx(pmf_single(kP, 1, 4).log_value + pmf_single(kP, 3, 1).log_value).epsilon(1e-15));

  // only the displacements matter
  CHECK(pmf_decreasing(kP, PositionValuePairs::of({{0, 3}, {5, -2}})).log_value ==
        doctest::Approx(pmf_decreasing(kP, PositionValuePairs::of({{1, 4}, {6, -1}})).log_value).epsilon(1e-15));

  // consecutive positions with strictly decreasing values match pmf_neighbors
  const auto consec = PositionValuePairs::of({{1, 3}, {2, 0}, {3, -2}});
  CHECK(pmf_decreasing(kP, consec).log_value ==
        doctest::Approx(pmf_neighbors(kP, 0, {3, 0, -2}).log_value).epsilon(1e-13));
}

TEST_CASE("cdf_product: telescoping, blocking reduction, limits") {
  // k=1 CDF equals the summed pmf tail
  for (long long x : {-2LL, 0LL, 3LL}) {
    double s = 0.0;
    for (long long v = x - 80; v <= x; ++v) s += pmf_single(kP, 1, v).prob();
    CHECK(cdf_product(kP, PositionValuePairs::of({{1, x}})).prob() == doctest::Approx(s).epsilon(1e-12));
  }

  // all-zero thresholds reproduce the Bernoulli blocking product
  const auto pv = PositionValuePairs::of({{-1, 0}, {1, 0}, {2, 0}});
  double expect = 0.0;
  for (long long i : {-1LL, 1LL, 2LL}) expect += blocking_prob(kP, i).value_leq_zero.log_value;
  CHECK(cdf_product(kP, pv).log_value == doctest::Approx(expect).epsilon(1e-13));

  // deep threshold saturates at 1
  CHECK(cdf_product(kP, PositionValuePairs::of({{0, 10000}})).prob() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(cdf_product(kP, PositionValuePairs::of({{0, 0}, {1, 2}})), std::invalid_argument);

  // shift invariance: literally a function of x - i
  const MallowsParams p{QParam(0.3), 2.0};
  CHECK(cdf_product(p, PositionValuePairs::of({{0, 2}, {2, 1}})).log_value ==
        doctest::Approx(cdf_product(p, PositionValuePairs::of({{5, 7}, {7, 6}})).log_value).epsilon(1e-15));
}

TEST_CASE("pmf_two_separated: product form and adjacent reduction") {
  CHECK(pmf_two_separated(kP, 0, 3, 2, 0).log_value ==
        doctest::Approx(pmf_decreasing(kP, PositionValuePairs::of({{1, 2}, {3, 0}})).log_value).epsilon(1e-15));
  const MallowsParams p{QParam(0.3), 2.0};
  CHECK(pmf_two_separated(p, -1, 2, 1, 0).log_value ==
        doctest::Approx(pmf_neighbors(p, -1, {1, 0}).log_value).epsilon(1e-14));
  CHECK_THROWS_AS(pmf_two_separated(kP, 0, 3, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(pmf_two_separated(kP, 0, 1, 2, 0), std::invalid_argument);
}

TEST_CASE("pmf_gap_one_increasing: degenerate q and total mass") {
  const MallowsParams p0{QParam(0.0), 1.0};
  CHECK(pmf_gap_one_increasing(p0, 0, 2).prob() == 1.0);
  CHECK(pmf_gap_one_increasing(p0, -1, 2).prob() == 0.0);
  CHECK_THROWS_AS(pmf_gap_one_increasing(kP, 2, 0), std::invalid_argument);

  // joint law of (omega(0), omega(2)) sums to 1: decreasing pairs use the
  // product form, increasing pairs the two-term expression
  double s = 0.0;
  for (long long x1 = -30; x1 <= 30; ++x1) {
    for (long long x3 = -30; x3 <= 30; ++x3) {
      if (x1 == x3) continue;
      if (x1 > x3) {
        s += pmf_two_separated(kP, -1, 3, x1, x3).prob();
      } else {
        s += pmf_gap_one_increasing(kP, x1, x3).prob();
      }
    }
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("blocking_prob: complementarity and monotone shape") {
  for (long long i = -6; i <= 6; ++i) {
    const auto b = blocking_prob(kP, i);
    CHECK(b.occupied.prob() + b.value_leq_zero.prob() == doctest::Approx(1.0).epsilon(1e-15));

    double tail = 0.0;
    for (long long x = i - 90; x <= 0; ++x) tail += pmf_single(kP, i, x).prob();
    CHECK(b.value_leq_zero.prob() == doctest::Approx(tail).epsilon(1e-12));
  }
  CHECK(blocking_prob(kP, 40).occupied.prob() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(blocking_prob(kP, -40).occupied.prob() == doctest::Approx(0.0).epsilon(1e-10));
  for (long long i = -10; i < 10; ++i) {
    CHECK(blocking_prob(kP, i + 1).occupied.prob() > blocking_prob(kP, i).occupied.prob());
  }
}

TEST_CASE("pmf_dsecond: d=1 reduction and normalization") {
  // at d=1 the closed form evaluates the displacement law at x-1
  for (long long x = -4; x <= 4; ++x) {
    CHECK(pmf_dsecond_convention(kP, {x}, false).log_value ==
          doctest::Approx(pmf_single(kP, 0, x - 1).log_value).epsilon(1e-13));
  }
  // the shipped convention agrees at alpha = 1 and sums to 1 over pairs
  double s = 0.0;
  for (long long x1 = -30; x1 <= 30; ++x1) {
    for (long long x2 = x1 + 1; x2 <= 30; ++x2) s += pmf_dsecond(kP, {x1, x2}).prob();
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(pmf_dsecond(kP, {3, 1}), std::invalid_argument);
}

TEST_CASE("pmf_multiclass: d=1 reduction, inversion bookkeeping, word sum") {
  const MallowsParams p{QParam(0.5), 2.0};
  for (long long x = -3; x <= 3; ++x) {
    CHECK(pmf_multiclass(p, {x}).log_value == doctest::Approx(pmf_dsecond(p, {x}).log_value).epsilon(1e-14));
  }
  // summing the word law over all orderings recovers the unordered law
  const std::vector<std::vector<long long>> words{{0, 2, 5},  {0, 5, 2}, {2, 0, 5},
                                                  {2, 5, 0},  {5, 0, 2}, {5, 2, 0}};
  double s = 0.0;
  for (const auto& w : words) s += pmf_multiclass(p, w).prob();
  CHECK(s == doctest::Approx(pmf_dsecond(p, {0, 2, 5}).prob()).epsilon(1e-13));
  CHECK_THROWS_AS(pmf_multiclass(p, {1, 1}), std::invalid_argument);
}

TEST_CASE("second_class_rate: detailed balance and q->1 scaling") {
  for (double qv : {0.1, 0.5, 0.9}) {
    for (double alpha : {0.25, 1.0, 4.0}) {
      const MallowsParams p{QParam(qv), alpha};
      for (long long x = -10; x <= 10; ++x) {
        const double lhs = pmf_single(p, x, 0).log_value + second_class_rate_log(p, x, +1);
        const double rhs = pmf_single(p, x + 1, 0).log_value + second_class_rate_log(p, x + 1, -1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
      }
    }
  }
  // q -> 1: scaled rates approach their stated limit at alpha = 1
  const double eps = 1e-3;
  const MallowsParams p{QParam(std::exp(-eps)), 1.0};
  for (double y : {-2.0, 0.5, 2.0}) {
    const long long x = static_cast<long long>(std::floor(y / eps));
    CHECK(std::abs(second_class_rate(p, x, +1) - 1.0) < 0.01);
    CHECK(std::abs(second_class_rate(p, x, -1) - 1.0) < 0.01);
  }
}

TEST_CASE("pmf_asepqm: collapse at M=1, normalization, block sum") {
  for (long long x = -5; x <= 5; ++x) {
    CHECK(pmf_asepqm(kP, 1, x).log_value == doctest::Approx(pmf_single(kP, 0, x + 1).log_value).epsilon(1e-14));
  }
  double s = 0.0;
  for (long long x = -40; x <= 40; ++x) s += pmf_asepqm(kP, 2, x).prob();
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));

  const double two_terms = pmf_single(kP, 0, 1).prob() + pmf_single(kP, 0, 2).prob();
  CHECK(pmf_asepqm(kP, 2, 0).prob() == doctest::Approx(two_terms).epsilon(1e-13));
}

TEST_CASE("asymptotic_check: logistic density and cdf limits") {
  const AsymptoticsReport rep = asymptotic_check(1e-3, 1.0, {0.0, 0.5}, 0);
  CHECK(rep.rows[0].logistic_density == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(rep.rows[1].scaled_pmf - rep.rows[1].logistic_density) <= 1e-2 * 0.25);

  const AsymptoticsReport c = asymptotic_check(1e-3, 1.0, {1.0, 0.0}, 2);
  const double limit = 1.0 / ((1.0 + std::exp(-1.0)) * 2.0);
  CHECK(c.cdf_limit == doctest::Approx(limit).epsilon(1e-12));
  CHECK(std::abs(c.cdf_scaled - limit) < 1e-2);
}

TEST_CASE("PositionValuePairs validation") {
  CHECK_THROWS_AS(PositionValuePairs::of({{0, 1}, {0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(PositionValuePairs::of({{0, 1}, {2, 1}}).require_distinct_values(), std::invalid_argument);
  CHECK_NOTHROW(PositionValuePairs::of({{0, 0}, {2, 0}}));  // repeated CDF cuts are fine
}
