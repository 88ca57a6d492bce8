#include "mallows/qseries.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace mallows {

double finite_qpoch(QParam q, long long n) {
  if (n < 0) throw std::invalid_argument("finite_qpoch: n must be nonnegative");
  double p = 1.0, qk = 1.0;
  for (long long k = 1; k <= n; ++k) {
    qk *= q.q;
    p *= 1.0 - qk;
  }
  return p;
}

double finite_qpoch_log(QParam q, long long n) {
  if (n < 0) throw std::invalid_argument("finite_qpoch: n must be nonnegative");
  double s = 0.0, qk = 1.0;
  for (long long k = 1; k <= n; ++k) {
    qk *= q.q;
    s += std::log1p(-qk);
  }
  return s;
}

double qpoch_inf_log(QParam q, const TruncationPolicy& policy) {
  if (q.q == 0.0) return 0.0;
  double s = 0.0, qk = 1.0;
  for (std::int64_t k = 1; k <= policy.max_terms; ++k) {
    qk *= q.q;
    s += std::log1p(-qk);
    // |remaining log tail| <= sum_{j>k} q^j / (1-q) = q^{k+1} / (1-q)^2
    if (qk * q.q / ((1.0 - q.q) * (1.0 - q.q)) < policy.tol) return s;
  }
  throw TruncationError("qpoch_inf: max_terms exhausted");
}

double qpoch_inf(QParam q, const TruncationPolicy& policy) { return std::exp(qpoch_inf_log(q, policy)); }

double tail_product_log(double alpha, QParam q, double offset, const TruncationPolicy& policy) {
  if (!(alpha > 0.0)) throw std::invalid_argument("tail_product: alpha must be positive");
  if (q.q == 0.0) {
    // q^{k+offset}: 0 for k+offset>0, 1 at exactly 0, divergent below.
    double s = 0.0;
    for (long long k = 0; k + offset <= 0.0; ++k) {
      if (k + offset < 0.0) throw std::domain_error("tail_product: q=0 with negative exponent diverges");
      s += std::log1p(alpha);
    }
    return s;
  }
  const double ln_q = q.log_q();
  double s = 0.0;
  for (std::int64_t k = 0; k <= policy.max_terms; ++k) {
    const double t = alpha * std::exp((static_cast<double>(k) + offset) * ln_q);
    // log tail from here on: sum_{j>=k} log1p(alpha q^{j+offset}) <= t/(1-q)
    if (t / (1.0 - q.q) < policy.tol) return s;
    s += std::log1p(t);
  }
  throw TruncationError("tail_product: max_terms exhausted");
}

double tail_product(double alpha, QParam q, double offset, const TruncationPolicy& policy) {
  return std::exp(tail_product_log(alpha, q, offset, policy));
}

double mixture_weight_log(long long c, QParam q, double alpha, const TruncationPolicy& policy) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mixture_weight: alpha must be positive");
  if (q.q == 0.0) return c == 0 ? 0.0 : kNegInf;
  const double logZ = qpoch_inf_log(q, policy) + tail_product_log(alpha, q, 0.5, policy) +
                      tail_product_log(1.0 / alpha, q, 0.5, policy);
  return static_cast<double>(c) * std::log(alpha) +
         0.5 * static_cast<double>(c) * static_cast<double>(c) * q.log_q() - logZ;
}

double mixture_weight(long long c, QParam q, double alpha, const TruncationPolicy& policy) {
  return std::exp(mixture_weight_log(c, q, alpha, policy));
}

long long mixture_weight_radius(QParam q, double alpha, double tol) {
  if (q.q == 0.0) return 1;
  const double ln_q = q.log_q();
  const double log_alpha = std::log(alpha);
  // weights peak near c* = log(1/alpha)/log q; expand until both geometric
  // one-sided tail bounds fall below tol
  const long long cstar = static_cast<long long>(std::llround(-log_alpha / ln_q));
  TruncationPolicy pol;
  const double logZ = qpoch_inf_log(q, pol) + tail_product_log(alpha, q, 0.5, pol) +
                      tail_product_log(1.0 / alpha, q, 0.5, pol);
  auto log_w = [&](long long c) {
    return static_cast<double>(c) * log_alpha + 0.5 * static_cast<double>(c) * static_cast<double>(c) * ln_q - logZ;
  };
  for (long long C = std::llabs(cstar) + 1; C < 100000; ++C) {
    const double rp = alpha * std::exp((static_cast<double>(C) + 0.5) * ln_q);       // w_{c+1}/w_c at c=C
    const double rm = (1.0 / alpha) * std::exp((static_cast<double>(C) - 0.5) * ln_q);  // w_{-c-1}/w_{-c} at -C
    if (rp >= 1.0 || rm >= 1.0) continue;
    const double tail = std::exp(log_w(C)) * rp / (1.0 - rp) + std::exp(log_w(-C)) * rm / (1.0 - rm);
    if (tail < tol) return C;
  }
  throw TruncationError("mixture_weight_radius: no radius below 100000");
}

namespace {

double euler_lhs(double z, QParam q, const TruncationPolicy& policy) {
  // sum_n q^{n(n-1)/2} z^n / (q;q)_n
  double acc = 1.0;  // n = 0
  double term = 1.0, qn = 1.0, poch = 1.0;
  for (std::int64_t n = 1; n <= policy.max_terms; ++n) {
    poch *= 1.0 - qn * q.q;       // (q;q)_n
    term *= z * qn;               // q^{n(n-1)/2} z^n accumulates q^{n-1} each step
    qn *= q.q;
    const double t = term / poch;
    acc += t;
    if (std::abs(t) < policy.tol * std::abs(acc) && qn < 0.5) return acc;
  }
  throw TruncationError("euler identity: max_terms exhausted");
}

double euler_rhs(double z, QParam q, const TruncationPolicy& policy) {
  double p = 1.0, qn = 1.0;
  for (std::int64_t n = 0; n <= policy.max_terms; ++n) {
    p *= 1.0 + qn * z;
    qn *= q.q;
    if (std::abs(z) * qn / (1.0 - q.q) < policy.tol) return p;
  }
  throw TruncationError("euler identity: max_terms exhausted");
}

double rel_err_from_logs(double log_lhs, double log_rhs) {
  return std::abs(std::expm1(log_lhs - log_rhs));
}

double lemmaA1_rel(double alpha, long long x, QParam q, const TruncationPolicy& policy) {
  const double ln_q = q.log_q(), la = std::log(alpha);
  const double xx = static_cast<double>(x);
  const double lhs = std::log1p(-q.q) + xx * la + 0.5 * xx * xx * ln_q +
                     tail_product_log(1.0 / alpha, q, -xx + 1.5, policy) +
                     tail_product_log(alpha, q, xx + 1.5, policy) -
                     tail_product_log(alpha, q, 0.5, policy) -
                     tail_product_log(1.0 / alpha, q, 0.5, policy);
  const double rhs = std::log1p(-q.q) + la + (xx - 0.5) * ln_q -
                     log1p_alpha_qpow(la, ln_q, 2 * x - 1) - log1p_alpha_qpow(la, ln_q, 2 * x + 1);
  return rel_err_from_logs(lhs, rhs);
}

double lemmaA2_rel(double alpha, const std::vector<long long>& xs, QParam q, const TruncationPolicy& policy) {
  const long long k = static_cast<long long>(xs.size());
  if (k < 1) throw std::domain_error("lemmaA2: needs k >= 1 values");
  if (!std::is_sorted(xs.begin(), xs.end())) throw std::domain_error("lemmaA2: needs x_1 <= ... <= x_k");
  const double ln_q = q.log_q(), la = std::log(alpha);
  const double x1 = static_cast<double>(xs.front()), xk = static_cast<double>(xs.back());
  double sum_rest = 0.0;
  for (std::size_t j = 1; j < xs.size(); ++j) sum_rest += static_cast<double>(xs[j]);

  double lhs = static_cast<double>(k) * std::log1p(-q.q) + x1 * la +
               (0.5 * x1 * x1 + sum_rest - (static_cast<double>(k) - 1.0) * x1) * ln_q;
  for (long long i = 1; i < k; ++i) {
    for (long long j = 0; j < xs[i] - xs[i - 1]; ++j) {
      lhs += log1p_alpha_qpow(la, ln_q, 2 * (j + xs[i - 1] + 2 * i - k) + 1);
    }
  }
  lhs += tail_product_log(alpha, q, xk + 0.5 + static_cast<double>(k), policy) +
         tail_product_log(1.0 / alpha, q, -x1 + 0.5 + static_cast<double>(k), policy) -
         tail_product_log(alpha, q, 0.5, policy) - tail_product_log(1.0 / alpha, q, 0.5, policy);

  double sum_all = 0.0;
  for (long long v : xs) sum_all += static_cast<double>(v);
  double rhs = static_cast<double>(k) * (std::log1p(-q.q) + la) +
               (sum_all - 0.5 * static_cast<double>(k) * static_cast<double>(k)) * ln_q;
  for (long long j = 1; j <= k; ++j) {
    rhs -= log1p_alpha_qpow(la, ln_q, 2 * (xs[j - 1] + 2 * j - k) - 3);
    rhs -= log1p_alpha_qpow(la, ln_q, 2 * (xs[j - 1] + 2 * j - k) - 1);
  }
  return rel_err_from_logs(lhs, rhs);
}

// The alternating q-binomial sum cancels through tens of orders of magnitude
// at the corners of the parameter grid, far past double precision. Both sides
// live in Q[sqrt(q)] for the exactly-represented double q, so evaluate there.
using Rational = boost::multiprecision::cpp_rational;

struct Surd {  // a + b*sqrt(q)
  Rational a, b;
};

Surd surd_mul(const Surd& u, const Surd& v, const Rational& q) {
  return Surd{u.a * v.a + q * u.b * v.b, u.a * v.b + u.b * v.a};
}

Surd surd_add(const Surd& u, const Surd& v) { return Surd{u.a + v.a, u.b + v.b}; }

Rational rational_pow(const Rational& base, long long e) {
  Rational out = 1;
  Rational acc = e >= 0 ? base : Rational(1) / base;
  for (long long n = std::llabs(e); n > 0; n >>= 1) {
    if (n & 1) out *= acc;
    acc *= acc;
  }
  return out;
}

// q^{e2/2} with the doubled exponent e2.
Surd qpow_half(const Rational& q, long long e2) {
  const long long flo = e2 >= 0 ? e2 / 2 : -((-e2 + 1) / 2);
  const long long rem = e2 - 2 * flo;  // 0 or 1
  Rational integer_part = rational_pow(q, flo);
  if (rem == 0) return Surd{integer_part, 0};
  return Surd{0, integer_part};
}

double lemmaA3_rel(double alpha, long long x1, long long i, long long b, long long k, QParam qp) {
  if (!(0 < b && b < k)) throw std::domain_error("lemmaA3: needs 0 < b < k");
  if (qp.q == 0.0) throw std::domain_error("lemmaA3: q = 0 is degenerate");
  const Rational q(qp.q), al(alpha);
  const long long kb = k - b;

  auto poch = [&](long long n) {
    Rational p = 1;
    for (long long j = 1; j <= n; ++j) p *= 1 - rational_pow(q, j);
    return p;
  };

  Surd lhs{0, 0};
  for (long long l = 0; l <= kb; ++l) {
    long long f2 = 0;  // doubled exponent of q^{f(l)}
    for (long long j = b + 1; j <= b + l; ++j) f2 += 2 * (k - j + i) + 3;
    f2 += (kb - l) * (2 * (kb - l + i) + 1);
    Surd term = qpow_half(q, f2);
    Rational coef = rational_pow(al, -kb) * poch(kb) / (poch(l) * poch(kb - l));
    if (l % 2 == 1) coef = -coef;
    term.a *= coef;
    term.b *= coef;
    for (long long j = b + l + 1; j <= k; ++j) {
      Surd factor = qpow_half(q, 2 * (x1 + j - i - k) - 1);
      factor.a *= al;
      factor.b *= al;
      factor.a += 1;
      term = surd_mul(term, factor, q);
    }
    lhs = surd_add(lhs, term);
  }
  const Surd rhs = qpow_half(q, 2 * kb * x1 + kb * (kb + 1));
  const Surd diff{lhs.a - rhs.a, lhs.b - rhs.b};
  if (diff.a == 0 && diff.b == 0) return 0.0;
  const double sq = std::sqrt(qp.q);
  const double num = std::abs(static_cast<double>(diff.a) + static_cast<double>(diff.b) * sq);
  const double den = std::abs(static_cast<double>(rhs.a) + static_cast<double>(rhs.b) * sq);
  return num / den;
}

}  // namespace

double verify_identity(std::string_view name, const IdentityInputs& in, QParam q,
                       const TruncationPolicy& policy) {
  if (name == "euler") {
    if (in.z <= -1.0) throw std::domain_error("euler: z must exceed -1");
    const double lhs = euler_lhs(in.z, q, policy), rhs = euler_rhs(in.z, q, policy);
    return std::abs(lhs - rhs) / std::abs(rhs);
  }
  if (name == "qbinomial") {
    if (in.n < 0) throw std::domain_error("qbinomial: n must be nonnegative");
    double lhs = 0.0;
    for (long long kk = 0; kk <= in.n; ++kk) {
      lhs += finite_qpoch(q, in.n) / (finite_qpoch(q, kk) * finite_qpoch(q, in.n - kk)) *
             std::pow(q.q, 0.5 * static_cast<double>(kk) * static_cast<double>(kk - 1)) *
             std::pow(in.x_real, static_cast<double>(kk));
    }
    double rhs = 1.0;
    for (long long m = 0; m < in.n; ++m) rhs *= 1.0 + std::pow(q.q, static_cast<double>(m)) * in.x_real;
    return std::abs(lhs - rhs) / std::abs(rhs);
  }
  if (name == "jacobi") {
    const long long C = mixture_weight_radius(q, in.alpha, policy.tol);
    const double logZ = qpoch_inf_log(q, policy) + tail_product_log(in.alpha, q, 0.5, policy) +
                        tail_product_log(1.0 / in.alpha, q, 0.5, policy);
    double s = 0.0;
    const double la = std::log(in.alpha), ln_q = q.log_q();
    for (long long c = -C; c <= C; ++c) {
      s += std::exp(static_cast<double>(c) * la + 0.5 * static_cast<double>(c) * static_cast<double>(c) * ln_q - logZ);
    }
    return std::abs(s - 1.0);
  }
  if (name == "lemmaA1") return lemmaA1_rel(in.alpha, in.x, q, policy);
  if (name == "lemmaA2") return lemmaA2_rel(in.alpha, in.xs, q, policy);
  if (name == "lemmaA3") return lemmaA3_rel(in.alpha, in.x1, in.i, in.b, in.k, q);
  throw std::invalid_argument("verify_identity: unknown identity '" + std::string(name) + "'");
}

void QPochTable::grow(long long r) {
  if (r < 0) throw std::invalid_argument("QPochTable: negative index");
  while (static_cast<long long>(log_poch_.size()) <= r) {
    const long long n = static_cast<long long>(log_poch_.size());
    double qn = std::pow(q_, static_cast<double>(n));
    log_poch_.push_back(log_poch_.back() + std::log1p(-qn));
    lin_poch_.push_back(lin_poch_.back() * (1.0 - qn));
  }
}

void QPochTable::growPow(long long e) {
  if (pow_.empty()) pow_.push_back(1.0);
  while (static_cast<long long>(pow_.size()) <= e) pow_.push_back(pow_.back() * q_);
}

}  // namespace mallows
