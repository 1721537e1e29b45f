#include "partlab/deletion.hpp"

#include <algorithm>

#include "partlab/samplers.hpp"

namespace partlab {

namespace {

template <Scalar S>
void require_kernel(const ExtParams<S>& params) {
  if (!params.has_deletion_kernel()) {
    throw Error(ErrorKind::UnsupportedKernel,
                "the deletion kernel needs alpha >= 0, theta >= 0, not both zero; got " + params.describe());
  }
}

// Calls f on every composition of n whose first part is `first`.
template <class F>
void for_each_tail(unsigned rest, std::vector<unsigned>& parts, F&& f) {
  if (rest == 0) {
    f(Composition(parts));
    return;
  }
  for (unsigned part = 1; part <= rest; ++part) {
    parts.push_back(part);
    for_each_tail(rest - part, parts, f);
    parts.pop_back();
  }
}

}  // namespace

template <Scalar S>
DecrementMatrix<S>::DecrementMatrix(unsigned n_max) : n_max_(n_max) {
  rows_.reserve(n_max);
  for (unsigned n = 1; n <= n_max; ++n) rows_.emplace_back(n, from_int<S>(0));
}

template <Scalar S>
S& DecrementMatrix<S>::at(unsigned n, unsigned m) {
  if (n < 1 || n > n_max_ || m < 1 || m > n) throw Error(ErrorKind::OutOfRange, "decrement index out of range");
  return rows_[n - 1][m - 1];
}

template <Scalar S>
S DecrementMatrix<S>::row_sum(unsigned n) const {
  if (n < 1 || n > n_max_) throw Error(ErrorKind::OutOfRange, "decrement row out of range");
  S s = from_int<S>(0);
  for (const S& v : rows_[n - 1]) s += v;
  return s;
}

template <Scalar S>
S deletion_kernel(const ExtParams<S>& params, const Composition& lambda, std::size_t j) {
  require_kernel(params);
  if (lambda.k() == 0) throw Error(ErrorKind::MalformedPartition, "empty composition");
  if (j >= lambda.k()) throw Error(ErrorKind::OutOfRange, "block index out of range");
  // A single block is deleted surely; the formula is 0/0 there when theta = 0.
  if (lambda.k() == 1) return from_int<S>(1);
  const S& alpha = params.alpha();
  const S& theta = params.theta();
  const S n = from_int<S>(lambda.n());
  const S part = from_int<S>(lambda[j]);
  const S k1 = from_int<S>(static_cast<long long>(lambda.k() - 1));
  return S((theta * part + alpha * (n - part)) / (n * (theta + alpha * k1)));
}

template <Scalar S>
DecrementMatrix<S> decrement_matrix(const ExtParams<S>& params, unsigned n_max) {
  require_kernel(params);
  const S& alpha = params.alpha();
  const S& theta = params.theta();
  const S one_minus_alpha = 1 - alpha;
  DecrementMatrix<S> q(n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned m = 1; m < n; ++m) {
      const S nm = from_int<S>(n - m);
      const S mm = from_int<S>(m);
      q.at(n, m) = binomial<S>(n, m) * rising_factorial(one_minus_alpha, m - 1) /
                   rising_factorial(S(theta + nm), m) * (nm * alpha + mm * theta) / from_int<S>(n);
    }
    // At m = n the factor theta cancels against (theta)_n.
    q.at(n, n) = rising_factorial(one_minus_alpha, n - 1) / rising_factorial(S(theta + 1), n - 1);
  }
  return q;
}

template <Scalar S>
S regeneration_ratio(const ExtParams<S>& params, const Composition& lambda) {
  const unsigned n = lambda.n();
  const unsigned first = lambda[0];
  const S& alpha = params.alpha();
  const S& theta = params.theta();
  if (lambda.k() == 1) {
    return S(rising_factorial(S(1 - alpha), n - 1) / rising_factorial(S(theta + 1), n - 1));
  }
  const S k1 = from_int<S>(static_cast<long long>(lambda.k() - 1));
  return S(deletion_kernel(params, lambda, 0) * binomial<S>(n, first) *
           rising_factorial(S(1 - alpha), first - 1) * (theta + k1 * alpha) /
           rising_factorial(S(theta + from_int<S>(n - first)), first));
}

template <Scalar S>
S f1_consistency(const ExtParams<S>& params, unsigned n, unsigned first) {
  require_kernel(params);
  if (n < 1 || n > 12) throw Error(ErrorKind::OutOfRange, "f1 consistency needs 1 <= n <= 12");
  if (first < 1 || first > n) throw Error(ErrorKind::OutOfRange, "first part out of range");
  std::optional<S> lo, hi;
  std::vector<unsigned> parts{first};
  for_each_tail(n - first, parts, [&](const Composition& lambda) {
    const S v = regeneration_ratio(params, lambda);
    if (!lo || v < *lo) lo = v;
    if (!hi || v > *hi) hi = v;
  });
  return S(*hi - *lo);
}

TauDeletion tau_delete(const SetPartition& partition, double tau, RngHandle& rng) {
  if (partition.k() == 0) throw Error(ErrorKind::MalformedPartition, "nothing to delete from an empty partition");
  std::vector<double> sizes;
  sizes.reserve(partition.k());
  for (const auto& block : partition.blocks()) sizes.push_back(static_cast<double>(block.size()));
  const std::size_t j = tau_biased_pick(sizes, tau, rng);
  return {static_cast<unsigned>(partition.block(j).size()), delete_block(partition, j)};
}

BulkDeletion bulk_delete(const FrequencyVector<double>& frequencies, RngHandle& rng) {
  if (frequencies.dust != 0.0) throw Error(ErrorKind::InvalidParams, "bulk deletion needs proper frequencies");
  const auto pick = size_biased_pick(frequencies.p, rng);
  if (!pick) throw Error(ErrorKind::DegenerateMass, "the deletion index fell in the untracked residual");
  const std::size_t J = *pick + 1;

  BulkDeletion out;
  out.deleted.assign(frequencies.p.begin(), frequencies.p.begin() + static_cast<std::ptrdiff_t>(J));
  double left = frequencies.residual;
  for (std::size_t i = J; i < frequencies.p.size(); ++i) left += frequencies.p[i];
  if (!(left > 0.0)) return out;

  FrequencyVector<double> rest;
  for (std::size_t i = J; i < frequencies.p.size(); ++i) rest.p.push_back(frequencies.p[i] / left);
  rest.residual = frequencies.residual / left;
  out.remainder = std::move(rest);
  return out;
}

#define PARTLAB_INSTANTIATE(S)                                                     \
  template class DecrementMatrix<S>;                                               \
  template S deletion_kernel(const ExtParams<S>&, const Composition&, std::size_t); \
  template DecrementMatrix<S> decrement_matrix(const ExtParams<S>&, unsigned);     \
  template S regeneration_ratio(const ExtParams<S>&, const Composition&);          \
  template S f1_consistency(const ExtParams<S>&, unsigned, unsigned);

PARTLAB_INSTANTIATE(Rational)
PARTLAB_INSTANTIATE(double)

#undef PARTLAB_INSTANTIATE

}  // namespace partlab
