#pragma once

#include <string_view>
#include <vector>

#include "mallows/common.hpp"

namespace mallows {

/// Finite q-Pochhammer (q;q)_n = prod_{k=1..n} (1 - q^k).
double finite_qpoch(QParam q, long long n);
/// log (q;q)_n.
double finite_qpoch_log(QParam q, long long n);

/// log (q;q)_inf, truncated under the policy's geometric tail bound.
double qpoch_inf_log(QParam q, const TruncationPolicy& policy = {});
double qpoch_inf(QParam q, const TruncationPolicy& policy = {});

/// Truncated infinite product prod_{k>=0} (1 + alpha q^{k+offset}).
/// Truncation when the remaining log-tail bound alpha q^{k+offset}/(1-q)
/// drops below policy.tol; throws TruncationError on max_terms exhaustion.
double tail_product_log(double alpha, QParam q, double offset, const TruncationPolicy& policy = {});
double tail_product(double alpha, QParam q, double offset, const TruncationPolicy& policy = {});

/// Jacobi weight of the ergodic component c in the alpha-mixture:
///   w_c = alpha^c q^{c^2/2} / [ (q;q)_inf prod(1+alpha q^{k+1/2}) prod(1+alpha^{-1} q^{k+1/2}) ].
/// Computed in log domain; the weights sum to 1 over c in Z.
double mixture_weight_log(long long c, QParam q, double alpha, const TruncationPolicy& policy = {});
double mixture_weight(long long c, QParam q, double alpha, const TruncationPolicy& policy = {});

/// Smallest radius C such that sum_{|c|>C} w_c < tol (Gaussian decay in c).
long long mixture_weight_radius(QParam q, double alpha, double tol);

/// Free variables for verify_identity. Only the fields an identity consumes
/// are read; see verify_identity for the per-identity contract.
struct IdentityInputs {
  double alpha = 1.0;              // jacobi, lemmaA1, lemmaA2, lemmaA3
  double z = 0.0;                  // euler
  double x_real = 0.0;             // qbinomial
  long long n = 0;                 // qbinomial
  long long x = 0;                 // lemmaA1
  long long x1 = 0;                // lemmaA3
  long long i = 0;                 // lemmaA3
  long long b = 0, k = 0;          // lemmaA3
  std::vector<long long> xs;       // lemmaA2 (weakly increasing)
};

/// Numeric check of one of the q-series identities the formulas rest on.
/// name in {euler, qbinomial, jacobi, lemmaA1, lemmaA2, lemmaA3}; returns
/// |LHS - RHS| / |RHS| evaluated under the policy.
///   euler:     sum_n q^{n(n-1)/2} z^n / (q;q)_n  =  prod_n (1 + q^n z)
///   qbinomial: sum_k [n k]_q q^{k(k-1)/2} x^k    =  prod_{m<n} (1 + q^m x)
///   jacobi:    sum_c w_c = 1
///   lemmaA1/A2/A3: the two sides of the corresponding appendix identity.
double verify_identity(std::string_view name, const IdentityInputs& in, QParam q,
                       const TruncationPolicy& policy = {});

/// Precomputed tables of (q;q)_r and integer powers of q, shared by the
/// summation oracles. Grows on demand.
class QPochTable {
 public:
  explicit QPochTable(QParam q) : q_(q.q) {
    log_poch_.push_back(0.0);
    lin_poch_.push_back(1.0);
  }

  double q() const { return q_; }
  /// (q;q)_r in linear domain.
  double poch(long long r) {
    grow(r);
    return lin_poch_[static_cast<std::size_t>(r)];
  }
  double log_poch(long long r) {
    grow(r);
    return log_poch_[static_cast<std::size_t>(r)];
  }
  /// q^e for integer e >= 0.
  double qpow(long long e) {
    if (q_ == 0.0) return e == 0 ? 1.0 : 0.0;
    if (e >= kPowCutoff) return 0.0;  // below double underflow for any q we table
    growPow(e);
    return pow_[static_cast<std::size_t>(e)];
  }

 private:
  static constexpr long long kPowCutoff = 1'000'000;
  void grow(long long r);
  void growPow(long long e);
  double q_;
  std::vector<double> log_poch_;
  std::vector<double> lin_poch_;
  std::vector<double> pow_;
};

}  // namespace mallows
