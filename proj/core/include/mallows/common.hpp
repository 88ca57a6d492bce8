#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mallows {

/// Thrown when a truncated sum/product hits max_terms before its tail bound
/// drops below the requested tolerance.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// The deformation parameter q of the model, restricted to [0,1).
/// q = 1 is rejected everywhere; q = 0 is a legal degenerate case.
struct QParam {
  double q;
  explicit QParam(double q_) : q(q_) {
    if (!(q >= 0.0 && q < 1.0)) {
      throw std::invalid_argument("QParam: q must lie in [0,1), got " + std::to_string(q_));
    }
  }
  double log_q() const { return q == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(q); }
};

/// Tolerance / term-budget pair threaded through every truncated evaluation.
/// Evaluation fails loudly (TruncationError) if max_terms is exhausted before
/// the geometric tail bound drops below tol.
struct TruncationPolicy {
  double tol = 1e-14;
  std::int64_t max_terms = 1'000'000;

  TruncationPolicy() = default;
  TruncationPolicy(double tol_, std::int64_t max_terms_) : tol(tol_), max_terms(max_terms_) {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("TruncationPolicy: tol must be in (0,1)");
    if (max_terms_ <= 0) throw std::invalid_argument("TruncationPolicy: max_terms must be positive");
  }
};

/// A probability held in log domain. value <= 0 up to roundoff, -inf allowed.
struct LogProb {
  double log_value = -std::numeric_limits<double>::infinity();

  LogProb() = default;
  explicit LogProb(double lv) : log_value(lv) {}
  static LogProb zero() { return LogProb(); }
  static LogProb one() { return LogProb(0.0); }
  static LogProb from_linear(double p) {
    return p <= 0.0 ? zero() : LogProb(std::log(p));
  }
  double prob() const { return std::exp(log_value); }
  bool is_zero() const { return log_value == -std::numeric_limits<double>::infinity(); }
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(1 + e^t), stable for large |t|.
inline double log1p_exp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

/// log(e^a + e^b).
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// log(e^a - e^b), requires a >= b.
inline double log_sub_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (!(a >= b)) throw std::domain_error("log_sub_exp: needs a >= b");
  if (a == b) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

/// log(1 + alpha * q^{e2/2}) with the half-integer exponent carried as the
/// doubled integer e2. log_alpha and ln_q passed precomputed.
inline double log1p_alpha_qpow(double log_alpha, double ln_q, std::int64_t e2) {
  if (ln_q == kNegInf) {  // q = 0
    if (e2 > 0) return 0.0;
    if (e2 == 0) return log1p_exp(log_alpha);
    return std::numeric_limits<double>::infinity();
  }
  return log1p_exp(log_alpha + 0.5 * static_cast<double>(e2) * ln_q);
}

/// Deterministic seeded RNG. Same (seed, stream) gives an identical draw
/// sequence on every platform: mt19937_64 is fully specified by the standard
/// and all variate transforms below are hand-rolled (no std distributions).
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream & 0xffffffffu),
                      static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1], safe as a log() argument.
  double uniform01_pos() { return 1.0 - uniform01(); }

  double exponential(double rate) { return -std::log(uniform01_pos()) / rate; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // unbiased rejection sampling on the top bits
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t seed_, stream_;
  std::mt19937_64 eng_;
};

}  // namespace mallows
