#include "partlab/eppf.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace partlab {

namespace {

// (a)_i (b)_j / (a+b)_{i+j} without range checks, so that b = 0 encodes W = 1.
template <Scalar S>
S beta_moment_unchecked(const S& a, const S& b, std::uint64_t i, std::uint64_t j) {
  if (j > 0 && is_zero(b)) return from_int<S>(0);
  return S(rising_factorial(a, i) * rising_factorial(b, j) / rising_factorial(S(a + b), i + j));
}

// Law of W_1 for the family: beta(1-alpha, theta+alpha) or the point 1/M.
template <Scalar S>
S first_fraction_moment(const ExtParams<S>& params, std::uint64_t r, std::uint64_t s) {
  if (params.family() == Family::Coupon) {
    S w = from_ratio<S>(1, params.types());
    return S(power(w, r) * power(S(1 - w), s));
  }
  const S& alpha = params.alpha();
  return beta_moment_unchecked(S(1 - alpha), S(params.theta() + alpha), r, s);
}

template <Scalar S>
bool exceeds_block_bound(const ExtParams<S>& params, std::size_t k) {
  auto bound = params.max_blocks();
  return bound && k > *bound;
}

Composition with_first(unsigned first, const Composition& rest) {
  std::vector<unsigned> parts;
  parts.reserve(rest.k() + 1);
  parts.push_back(first);
  parts.insert(parts.end(), rest.parts().begin(), rest.parts().end());
  return Composition(std::move(parts));
}

}  // namespace

template <Scalar S>
BetaParams<S>::BetaParams(S a_, S b_) : a(std::move(a_)), b(std::move(b_)) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorKind::InvalidParams, "beta parameters must be positive");
}

template <Scalar S>
S beta_moment(const BetaParams<S>& beta, std::uint64_t i, std::uint64_t j) {
  return beta_moment_unchecked(beta.a, beta.b, i, j);
}

template <Scalar S>
S eppf(const ExtParams<S>& params, const Composition& lambda) {
  const std::size_t k = lambda.k();
  const unsigned n = lambda.n();
  if (exceeds_block_bound(params, k)) return from_int<S>(0);

  if (params.family() == Family::Coupon) {
    const long long types = params.types();
    S out = from_int<S>(1);
    for (std::size_t i = 0; i < k; ++i) out *= from_int<S>(types - static_cast<long long>(i));
    return S(out / power(from_int<S>(types), n));
  }

  const S& alpha = params.alpha();
  const S& theta = params.theta();
  S out = from_int<S>(1);
  for (std::size_t i = 1; i < k; ++i) out *= S(theta + from_int<S>(static_cast<long long>(i)) * alpha);
  const S one_minus_alpha = 1 - alpha;
  for (unsigned part : lambda.parts()) out *= rising_factorial(one_minus_alpha, part - 1);
  out /= rising_factorial(S(theta + 1), n - 1);
  return out;
}

template <Scalar S>
S addition_residual(const ExtParams<S>& params, const Composition& lambda) {
  S out = eppf(params, lambda);
  std::vector<unsigned> parts = lambda.parts();
  for (std::size_t j = 0; j < parts.size(); ++j) {
    ++parts[j];
    out -= eppf(params, Composition(parts));
    --parts[j];
  }
  parts.push_back(1);
  out -= eppf(params, Composition(std::move(parts)));
  return out;
}

template <Scalar S>
MomentOracle<S> residual_moment_oracle(const ExtParams<S>& params) {
  return [params](unsigned i, std::uint64_t r, std::uint64_t s) -> std::optional<S> {
    if (i < 1) return std::nullopt;
    if (params.family() == Family::Coupon) {
      const unsigned types = params.types();
      if (i > types) return from_int<S>(0);
      S w = from_ratio<S>(1, types - i + 1);
      return S(power(w, r) * power(S(1 - w), s));
    }
    if (auto bound = params.max_blocks(); bound && i > *bound) return from_int<S>(0);
    const S& alpha = params.alpha();
    S b = params.theta() + from_int<S>(i) * alpha;
    return beta_moment_unchecked(S(1 - alpha), b, r, s);
  };
}

template <Scalar S>
S eppf_from_moments(const MomentOracle<S>& oracle, const Composition& lambda) {
  S out = from_int<S>(1);
  unsigned tail = lambda.n();
  for (std::size_t i = 0; i < lambda.k(); ++i) {
    tail -= lambda[i];
    auto moment = oracle(static_cast<unsigned>(i + 1), lambda[i] - 1, tail);
    if (!moment) {
      throw Error(ErrorKind::OracleFailure, "no moment for block " + std::to_string(i + 1));
    }
    out *= *moment;
    if (is_zero(out)) break;
  }
  return out;
}

template <Scalar S>
S q_first_block(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m) {
  if (m < 1 || m > n) throw Error(ErrorKind::OutOfRange, "q(n:m) needs 1 <= m <= n");
  return first_fraction_moment(params, m - 1, n - m);
}

template <Scalar S>
S first_color_count_law(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m) {
  if (n < 1 || m < 1) throw Error(ErrorKind::OutOfRange, "P(T_n = m) needs n, m >= 1");
  return S(binomial<S>(m + n - 2, m - 1) * q_first_block(params, n + m, m));
}

template <Scalar S>
S first_color_partial_sum(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m_max) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "n must be positive");
  S total = from_int<S>(0);
  if (m_max == 0) return total;
  // term(m+1)/term(m) = (m+n-1)/m * ratio of consecutive moments of W_1.
  S term = first_color_count_law(params, n, 1);
  double compensation = 0.0;
  for (std::uint64_t m = 1;; ++m) {
    if constexpr (is_exact_v<S>) {
      total += term;
    } else {
      // Neumaier summation; the terms are tiny against the running total.
      double t = total + term;
      if (std::abs(total) >= std::abs(term)) {
        compensation += (total - t) + term;
      } else {
        compensation += (term - t) + total;
      }
      total = t;
    }
    if (m == m_max || is_zero(term)) break;
    S ratio = from_ratio<S>(static_cast<long long>(m + n - 1), static_cast<long long>(m));
    if (params.family() == Family::Coupon) {
      ratio *= from_ratio<S>(1, params.types());
    } else {
      const S a = 1 - params.alpha();
      const S b = params.theta() + params.alpha();
      const S mm = from_int<S>(static_cast<long long>(m));
      ratio *= S((a + mm - 1) / (a + b + from_int<S>(static_cast<long long>(n)) + mm - 1));
    }
    term *= ratio;
  }
  if constexpr (!is_exact_v<S>) total += compensation;
  return total;
}

template <Scalar S>
S first_color_tail(const ExtParams<S>& params, std::uint64_t n, std::uint64_t m_max) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "n must be positive");
  const std::uint64_t total = n + m_max;
  S out = from_int<S>(0);
  for (std::uint64_t j = m_max + 1; j <= total; ++j) {
    out += S(binomial<S>(total - 1, j - 1) * q_first_block(params, total, j));
  }
  return out;
}

double first_color_tail_asymptotic(const ExtParams<double>& params, std::uint64_t n, std::uint64_t m_max) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "n must be positive");
  double out = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double lead = static_cast<double>(m_max + i);  // j - 1 with j = m_max + 1 + i
    const std::uint64_t rest = n - 1 - i;                 // N - j
    double choose = 1.0;
    for (std::uint64_t t = 1; t <= rest; ++t) choose *= (lead + static_cast<double>(t)) / static_cast<double>(t);
    double q = 0.0;
    if (params.family() == Family::Coupon) {
      const double w = 1.0 / params.types();
      q = std::exp(lead * std::log(w)) * std::pow(1.0 - w, static_cast<double>(rest));
    } else {
      const double a = 1.0 - params.alpha();
      const double b = params.theta() + params.alpha();
      if (b == 0.0) {
        q = rest == 0 ? 1.0 : 0.0;
      } else {
        // (a)_lead (b)_rest / (a+b)_{lead+rest}
        q = boost::math::tgamma_ratio(a + b, a) * boost::math::tgamma_delta_ratio(a + lead, b) *
            rising_factorial(b, rest) / rising_factorial(a + b + lead, rest);
      }
    }
    out += choose * q;
  }
  return out;
}

template <Scalar S>
SeriesResult<S> derived_eppf(const ExtParams<S>& params, const Composition& mu, double tolerance,
                             std::uint64_t max_terms) {
  SeriesResult<S> out{from_int<S>(0), 0.0, 0};
  if (exceeds_block_bound(params, mu.k() + 1)) return out;
  const ExtParams<double> float_params = to_double(params);
  const std::uint64_t n_mu = mu.n();

  S term = eppf(params, with_first(1, mu));
  std::uint64_t next_check = 1;
  for (std::uint64_t l = 1; l <= max_terms; ++l) {
    out.value += term;
    out.terms = l;
    if (l == next_check) {
      // Each term is P(T = l, remainder = mu) <= P(T = l), so the omitted
      // tail is at most P(T_{n_mu} > l).
      out.tail_bound = first_color_tail_asymptotic(float_params, n_mu, l);
      if (out.tail_bound < tolerance) return out;
      next_check = l < 64 ? l + 1 : l + l / 8;
    }
    S ratio = from_ratio<S>(static_cast<long long>(l + n_mu - 1), static_cast<long long>(l));
    if (params.family() == Family::Coupon) {
      ratio *= from_ratio<S>(1, params.types());
    } else {
      const S ll = from_int<S>(static_cast<long long>(l));
      ratio *= S((ll - params.alpha()) / (params.theta() + ll + from_int<S>(static_cast<long long>(n_mu))));
    }
    term *= ratio;
  }
  throw Error(ErrorKind::NonConvergence,
              "derived EPPF tail bound " + std::to_string(out.tail_bound) + " after " +
                  std::to_string(max_terms) + " terms");
}

template <Scalar S>
S derived_eppf_closed(const ExtParams<S>& params, const Composition& mu) {
  if (exceeds_block_bound(params, mu.k() + 1)) return from_int<S>(0);
  return eppf(params.shifted(), mu);
}

template <Scalar S>
S factorization_check(const ExtParams<S>& params, const Composition& lambda) {
  if (lambda.k() < 2) throw Error(ErrorKind::OutOfRange, "factorization needs at least two parts");
  const S p = eppf(params, lambda);
  const S q = q_first_block(params, lambda.n(), lambda[0]);
  if (is_zero(q)) return p;
  std::vector<unsigned> rest(lambda.parts().begin() + 1, lambda.parts().end());
  return S(p - q * derived_eppf_closed(params, Composition(std::move(rest))));
}

#define PARTLAB_INSTANTIATE(S)                                                                   \
  template struct BetaParams<S>;                                                                 \
  template S beta_moment(const BetaParams<S>&, std::uint64_t, std::uint64_t);                    \
  template S eppf(const ExtParams<S>&, const Composition&);                                      \
  template S addition_residual(const ExtParams<S>&, const Composition&);                         \
  template MomentOracle<S> residual_moment_oracle(const ExtParams<S>&);                          \
  template S eppf_from_moments(const MomentOracle<S>&, const Composition&);                      \
  template S q_first_block(const ExtParams<S>&, std::uint64_t, std::uint64_t);                   \
  template S first_color_count_law(const ExtParams<S>&, std::uint64_t, std::uint64_t);           \
  template S first_color_partial_sum(const ExtParams<S>&, std::uint64_t, std::uint64_t);         \
  template S first_color_tail(const ExtParams<S>&, std::uint64_t, std::uint64_t);                \
  template SeriesResult<S> derived_eppf(const ExtParams<S>&, const Composition&, double,         \
                                        std::uint64_t);                                          \
  template S derived_eppf_closed(const ExtParams<S>&, const Composition&);                       \
  template S factorization_check(const ExtParams<S>&, const Composition&);

PARTLAB_INSTANTIATE(Rational)
PARTLAB_INSTANTIATE(double)

#undef PARTLAB_INSTANTIATE

}  // namespace partlab
