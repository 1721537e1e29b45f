#pragma once

// Exchangeable partition probability functions of the extended family and
// the first-block quantities derived from them.

#include <cstdint>
#include <functional>
#include <optional>

#include "partlab/core.hpp"

namespace partlab {

template <Scalar S>
struct BetaParams {
  S a;
  S b;

  BetaParams(S a_, S b_);
};

/// E[X^i (1-X)^j] = (a)_i (b)_j / (a+b)_{i+j} for X ~ beta(a, b).
template <Scalar S>
S beta_moment(const BetaParams<S>& beta, std::uint64_t i, std::uint64_t j);

/// p(lambda); zero when lambda has more parts than the family allows.
template <Scalar S>
S eppf(const ExtParams<S>& params, const Composition& lambda);

/// p(lambda) - sum_j p(lambda^(j)), where lambda^(j) increments part j and
/// lambda^(k+1) appends a part 1. Exactly 0 for a consistent family.
template <Scalar S>
S addition_residual(const ExtParams<S>& params, const Composition& lambda);

/// E[W_i^r (1 - W_i)^s] for the residual fraction of block i (1-based).
/// An empty result signals that the oracle cannot answer.
template <Scalar S>
using MomentOracle = std::function<std::optional<S>(unsigned i, std::uint64_t r, std::uint64_t s)>;

/// Independent residual fractions of the family: beta(1-alpha, theta+i alpha)
/// (W_M = 1 in the negative-alpha range) or W_i = 1/(M-i+1) for coupons.
template <Scalar S>
MomentOracle<S> residual_moment_oracle(const ExtParams<S>& params);

/// Product over blocks of E[W_i^(lambda_i - 1) (1 - W_i)^Lambda_{i+1}].
template <Scalar S>
S eppf_from_moments(const MomentOracle<S>& oracle, const Composition& lambda);

/// q(n:m) = P(B_1 cap [n] = [m]) = E[W_1^(m-1) (1-W_1)^(n-m)].
template <Scalar S>
S q_first_block(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m);

/// P(T_n = m) = C(m+n-2, m-1) q(n+m : m): first-colour balls before the n-th
/// ball of another colour.
template <Scalar S>
S first_color_count_law(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m);

/// Direct partial sum of first_color_count_law over m = 1..m_max.
template <Scalar S>
S first_color_partial_sum(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m_max);

/// P(T_n > m_max) as the finite sum P(|B_1 cap [n+m_max]| > m_max).
template <Scalar S>
S first_color_tail(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m_max);

/// Float evaluation of first_color_tail through gamma-function ratios;
/// stays accurate for m_max far beyond what direct summation can reach.
double first_color_tail_asymptotic(const ExtParams<double>& params, std::uint64_t n, std::uint64_t m_max);

template <Scalar S>
struct SeriesResult {
  S value;
  double tail_bound = 0.0;  ///< upper bound on the omitted tail
  std::uint64_t terms = 0;
};

/// p'(mu) = sum_{l >= 1} C(l + n_mu - 2, l - 1) p(l, mu), truncated once the
/// negative-binomial tail bound drops below `tolerance`.
template <Scalar S>
SeriesResult<S> derived_eppf(const ExtParams<S>& params, const Composition& mu, double tolerance,
                             std::uint64_t max_terms = 50'000'000);

/// Closed form of the same function: the EPPF at the shifted parameters.
template <Scalar S>
S derived_eppf_closed(const ExtParams<S>& params, const Composition& mu);

/// p(lambda) - q(n : lambda_1) p'(lambda_2, ..., lambda_k); needs k >= 2.
template <Scalar S>
S factorization_check(const ExtParams<S>& params, const Composition& lambda);

}  // namespace partlab
