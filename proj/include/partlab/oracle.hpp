#pragma once

// Ground truth for small n: exhaustive enumeration, exact laws and the
// characterization checks built on them, plus the goodness-of-fit tests used
// by the Monte Carlo suites.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "partlab/core.hpp"

namespace partlab {

inline constexpr unsigned kMaxEnumerationSize = 12;
inline constexpr unsigned kMaxExactLawSize = 10;

std::uint64_t bell_number(unsigned n);

/// Calls f(rgs) for every restricted growth string of length n that starts
/// with `prefix` (itself a valid growth string), in lexicographic order.
template <class F>
void for_each_rgs(unsigned n, const Rgs& prefix, F&& f) {
  if (prefix.size() > n) throw Error(ErrorKind::OutOfRange, "growth-string prefix longer than n");
  Rgs a(prefix);
  a.resize(n, 0);
  if (n == 0) {
    f(static_cast<const Rgs&>(a));
    return;
  }
  // top[i] = max(a[0..i]) keeps each step O(1).
  std::vector<std::uint8_t> top(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > (i == 0 ? 0 : top[i - 1] + 1)) throw Error(ErrorKind::MalformedPartition, "invalid growth-string prefix");
    top[i] = i == 0 ? a[0] : std::max(top[i - 1], a[i]);
  }
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(prefix.size()), 1);
  for (;;) {
    f(static_cast<const Rgs&>(a));
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1;
    while (i >= lo && a[i] == top[i - 1] + 1) --i;
    if (i < lo) return;
    ++a[i];
    top[i] = std::max(top[i - 1], a[i]);
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
      a[j] = 0;
      top[j] = top[j - 1];
    }
  }
}

template <class F>
void for_each_rgs(unsigned n, F&& f) {
  for_each_rgs(n, Rgs{}, std::forward<F>(f));
}

/// All Bell(n) partitions of [n], 1 <= n <= 12.
std::vector<SetPartition> enumerate_partitions(unsigned n);

/// All 2^(n-1) compositions of n.
std::vector<Composition> compositions(unsigned n);

/// Block sizes in order of appearance, read off a growth string.
Composition rgs_sizes(const Rgs& rgs);

/// Growth string of the partition left after deleting block `j`.
Rgs rgs_delete_block(const Rgs& rgs, std::uint8_t j);

/// Exact probabilities on a finite outcome space.
template <class Key, Scalar S>
struct ExactLaw {
  std::map<Key, S> mass;

  void add(const Key& key, const S& p) {
    auto [it, inserted] = mass.try_emplace(key, p);
    if (!inserted) it->second += p;
  }
  S at(const Key& key) const {
    auto it = mass.find(key);
    return it == mass.end() ? from_int<S>(0) : it->second;
  }
  S total() const {
    S t = from_int<S>(0);
    for (const auto& [key, p] : mass) t += p;
    return t;
  }
  void scale(const S& factor) {
    for (auto& [key, p] : mass) p *= factor;
  }
};

template <class Key, Scalar S>
S max_deviation(const ExactLaw<Key, S>& a, const ExactLaw<Key, S>& b) {
  S worst = from_int<S>(0);
  for (const auto& [key, p] : a.mass) {
    const S d = abs_value(S(p - b.at(key)));
    if (d > worst) worst = d;
  }
  for (const auto& [key, p] : b.mass) {
    if (a.mass.count(key) == 0 && abs_value(p) > worst) worst = abs_value(p);
  }
  return worst;
}

template <Scalar S>
using PartitionLaw = ExactLaw<Rgs, S>;

/// Law of Pi_n, keyed by growth string; n <= 10.
template <Scalar S>
PartitionLaw<S> exact_law(const ExtParams<S>& params, unsigned n);

/// Conditional law of Pi_n minus its first block given |B_1| = m, compared
/// for every m < n with `target(n - m)`. Returns the largest deviation.
template <Scalar S>
S deletion_law_deviation(const PartitionLaw<S>& law, unsigned n,
                         const std::function<PartitionLaw<S>(unsigned)>& target);

/// deletion_law_deviation of the family against its shifted parameters.
template <Scalar S>
S deletion_law_check(const ExtParams<S>& params, unsigned n);

template <Scalar S>
struct TauRegenReport {
  S remainder_deviation{};  ///< remainder given m vs the law of Pi_{n-m}
  S size_deviation{};       ///< deleted-size law vs the decrement row n
  S max() const { return remainder_deviation > size_deviation ? remainder_deviation : size_deviation; }
};

template <Scalar S>
TauRegenReport<S> tau_regen_check(const ExtParams<S>& params, unsigned n);

/// Both sides of the compositional formula perm_tau = order_xi o perm_0 as
/// exact laws on visit orders; returns the largest deviation. k <= 6.
template <Scalar S>
S leem_check(std::span<const S> x, const S& tau);

/// For a size-biased permutation of x, the events A_j = {x_j precedes every
/// later x_l} are independent with P(A_j) = x_j / (x_j + ... + x_k).
/// Returns the largest deviation over all joint events. k <= 5.
template <Scalar S>
S record_independence_check(std::span<const S> x);

// ---------------------------------------------------------------------------
// Goodness of fit.

struct ChiSquareResult {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson test of counts against probabilities (same indexing). Cells with
/// expected count below `min_expected` are pooled into one cell; a pooled
/// cell that is still too small joins the smallest remaining cell.
ChiSquareResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                           double min_expected = 5.0);

template <class Key>
ChiSquareResult chi_square(const std::map<Key, std::uint64_t>& observed, const ExactLaw<Key, double>& law,
                           double min_expected = 5.0) {
  std::vector<std::uint64_t> counts;
  std::vector<double> probabilities;
  for (const auto& [key, p] : law.mass) {
    auto it = observed.find(key);
    counts.push_back(it == observed.end() ? 0 : it->second);
    probabilities.push_back(p);
  }
  for (const auto& [key, c] : observed) {
    if (law.mass.count(key) == 0) {
      counts.push_back(c);
      probabilities.push_back(0.0);
    }
  }
  return chi_square(counts, probabilities, min_expected);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic distribution and
/// Stephens' small-sample correction.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Q_KS(lambda) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

}  // namespace partlab
