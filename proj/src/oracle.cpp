#include "partlab/oracle.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "partlab/deletion.hpp"
#include "partlab/eppf.hpp"
#include "partlab/samplers.hpp"

namespace partlab {

std::uint64_t bell_number(unsigned n) {
  if (n > 25) throw Error(ErrorKind::OutOfRange, "Bell numbers beyond n = 25 overflow 64 bits");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (unsigned i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

std::vector<SetPartition> enumerate_partitions(unsigned n) {
  if (n < 1 || n > kMaxEnumerationSize) throw Error(ErrorKind::OutOfRange, "enumeration supports 1 <= n <= 12");
  std::vector<SetPartition> out;
  out.reserve(bell_number(n));
  for_each_rgs(n, [&](const Rgs& rgs) { out.push_back(SetPartition::from_rgs(rgs)); });
  return out;
}

std::vector<Composition> compositions(unsigned n) {
  if (n < 1 || n > 24) throw Error(ErrorKind::OutOfRange, "compositions supported for 1 <= n <= 24");
  std::vector<Composition> out;
  const std::uint32_t cuts = n - 1;
  out.reserve(std::size_t{1} << cuts);
  // Bit i of the mask set means a part ends after element i + 1.
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << cuts); ++mask) {
    std::vector<unsigned> parts;
    unsigned run = 1;
    for (std::uint32_t i = 0; i < cuts; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    out.emplace_back(std::move(parts));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Composition rgs_sizes(const Rgs& rgs) {
  std::vector<unsigned> sizes;
  for (std::uint8_t b : rgs) {
    if (b >= sizes.size()) sizes.resize(b + 1U, 0);
    ++sizes[b];
  }
  return Composition(std::move(sizes));
}

Rgs rgs_delete_block(const Rgs& rgs, std::uint8_t j) {
  Rgs out;
  out.reserve(rgs.size());
  for (std::uint8_t b : rgs) {
    if (b == j) continue;
    out.push_back(b > j ? static_cast<std::uint8_t>(b - 1) : b);
  }
  return out;
}

template <Scalar S>
PartitionLaw<S> exact_law(const ExtParams<S>& params, unsigned n) {
  if (n < 1 || n > kMaxExactLawSize) throw Error(ErrorKind::OutOfRange, "exact laws supported for 1 <= n <= 10");
  std::map<std::vector<unsigned>, S> cache;
  PartitionLaw<S> law;
  for_each_rgs(n, [&](const Rgs& rgs) {
    const Composition sizes = rgs_sizes(rgs);
    auto it = cache.find(sizes.parts());
    if (it == cache.end()) it = cache.emplace(sizes.parts(), eppf(params, sizes)).first;
    if (!is_zero(it->second)) law.mass.emplace_hint(law.mass.end(), rgs, it->second);
  });
  return law;
}

namespace {

template <Scalar S>
S conditional_deviation(std::map<unsigned, PartitionLaw<S>>& joint, const std::function<PartitionLaw<S>(unsigned)>& target,
                        unsigned n) {
  S worst = from_int<S>(0);
  for (auto& [m, law] : joint) {
    if (m >= n) continue;
    const S marginal = law.total();
    if (is_zero(marginal)) throw Error(ErrorKind::ZeroProbabilityEvent, "deleted size has probability 0");
    law.scale(S(1 / marginal));
    const S d = max_deviation(law, target(n - m));
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace

template <Scalar S>
S deletion_law_deviation(const PartitionLaw<S>& law, unsigned n, const std::function<PartitionLaw<S>(unsigned)>& target) {
  std::map<unsigned, PartitionLaw<S>> joint;
  for (const auto& [rgs, p] : law.mass) {
    if (rgs.size() != n) throw Error(ErrorKind::MalformedPartition, "law is not on partitions of [n]");
    const auto m = static_cast<unsigned>(std::count(rgs.begin(), rgs.end(), std::uint8_t{0}));
    if (m < n) joint[m].add(rgs_delete_block(rgs, 0), p);
  }
  return conditional_deviation(joint, target, n);
}

template <Scalar S>
S deletion_law_check(const ExtParams<S>& params, unsigned n) {
  const PartitionLaw<S> law = exact_law(params, n);
  return deletion_law_deviation<S>(law, n, [&](unsigned size) { return exact_law(params.shifted(), size); });
}

template <Scalar S>
TauRegenReport<S> tau_regen_check(const ExtParams<S>& params, unsigned n) {
  if (!params.has_deletion_kernel()) {
    throw Error(ErrorKind::UnsupportedKernel, "tau-regeneration needs alpha, theta >= 0, not both zero");
  }
  const S tau = params.tau();
  const PartitionLaw<S> law = exact_law(params, n);
  std::map<unsigned, PartitionLaw<S>> joint;
  std::vector<S> size_law(n + 1, from_int<S>(0));
  for (const auto& [rgs, p] : law.mass) {
    const Composition sizes = rgs_sizes(rgs);
    std::vector<S> x;
    for (unsigned part : sizes.parts()) x.push_back(from_int<S>(part));
    for (std::size_t j = 0; j < sizes.k(); ++j) {
      const S weight = p * tau_pick_probability<S>(x, tau, j);
      if (is_zero(weight)) continue;
      const unsigned m = sizes[j];
      size_law[m] += weight;
      if (m < n) joint[m].add(rgs_delete_block(rgs, static_cast<std::uint8_t>(j)), weight);
    }
  }
  TauRegenReport<S> report;
  report.remainder_deviation = conditional_deviation<S>(
      joint, [&](unsigned size) { return exact_law(params, size); }, n);
  const DecrementMatrix<S> q = decrement_matrix(params, n);
  report.size_deviation = from_int<S>(0);
  for (unsigned m = 1; m <= n; ++m) {
    const S d = abs_value(S(size_law[m] - q(n, m)));
    if (d > report.size_deviation) report.size_deviation = d;
  }
  return report;
}

namespace {

std::vector<std::vector<std::size_t>> all_permutations(std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

template <Scalar S>
void check_positive(std::span<const S> x, std::size_t k_max) {
  if (x.empty() || x.size() > k_max) throw Error(ErrorKind::OutOfRange, "sequence length outside the enumerable range");
  for (const S& v : x) {
    if (!(v > 0)) throw Error(ErrorKind::OutOfRange, "entries must be positive");
  }
}

}  // namespace

template <Scalar S>
S leem_check(std::span<const S> x, const S& tau) {
  check_positive(x, 6);
  if (tau < 0 || tau > 1) throw Error(ErrorKind::InvalidParams, "tau must lie in [0,1]");
  const std::size_t k = x.size();
  const auto perms = all_permutations(k);
  const S zero = from_int<S>(0);
  const RecordTilt<S> xi = RecordTilt<S>::from_tau(tau);

  ExactLaw<std::vector<std::size_t>, S> lhs;
  for (const auto& order : perms) lhs.add(order, tau_perm_probability<S>(x, tau, order));

  std::vector<S> arrangement_probability;
  arrangement_probability.reserve(perms.size());
  for (const auto& a : perms) arrangement_probability.push_back(order_probability<S>(xi, a));

  ExactLaw<std::vector<std::size_t>, S> rhs;
  std::vector<std::size_t> output(k);
  for (const auto& sigma : perms) {
    const S p0 = tau_perm_probability<S>(x, zero, sigma);
    if (is_zero(p0)) continue;
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (is_zero(arrangement_probability[i])) continue;
      const auto& a = perms[i];
      for (std::size_t p = 0; p < k; ++p) output[p] = sigma[a[p]];
      rhs.add(output, S(p0 * arrangement_probability[i]));
    }
  }
  return max_deviation(lhs, rhs);
}

template <Scalar S>
S record_independence_check(std::span<const S> x) {
  check_positive(x, 5);
  const std::size_t k = x.size();
  const S zero = from_int<S>(0);
  std::vector<S> joint(std::size_t{1} << k, zero);
  std::vector<std::size_t> position(k);
  for (const auto& sigma : all_permutations(k)) {
    const S p = tau_perm_probability<S>(x, zero, sigma);
    for (std::size_t i = 0; i < k; ++i) position[sigma[i]] = i;
    std::size_t events = 0;
    for (std::size_t j = 0; j < k; ++j) {
      bool record = true;
      for (std::size_t l = j + 1; l < k; ++l) record = record && position[j] < position[l];
      if (record) events |= std::size_t{1} << j;
    }
    // Credit every sub-event contained in the realised set.
    for (std::size_t mask = events;; mask = (mask - 1) & events) {
      joint[mask] += p;
      if (mask == 0) break;
    }
  }
  std::vector<S> marginal(k);
  S tail = zero;
  for (std::size_t j = k; j-- > 0;) {
    tail += x[j];
    marginal[j] = x[j] / tail;
  }
  S worst = zero;
  for (std::size_t mask = 0; mask < joint.size(); ++mask) {
    S product = from_int<S>(1);
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (std::size_t{1} << j)) product *= marginal[j];
    }
    const S d = abs_value(S(joint[mask] - product));
    if (d > worst) worst = d;
  }
  return worst;
}

// ---------------------------------------------------------------------------

ChiSquareResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                           double min_expected) {
  if (observed.size() != probabilities.size()) throw Error(ErrorKind::OutOfRange, "counts and probabilities differ in length");
  double total = 0.0;
  for (std::uint64_t c : observed) total += static_cast<double>(c);
  if (!(total > 0.0)) throw Error(ErrorKind::DegenerateBins, "no observations");

  struct Cell {
    double observed;
    double expected;
  };
  std::vector<Cell> cells;
  Cell pooled{0.0, 0.0};
  bool impossible_hit = false;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probabilities[i] * total;
    const auto o = static_cast<double>(observed[i]);
    if (probabilities[i] <= 0.0) {
      impossible_hit = impossible_hit || o > 0.0;
      continue;
    }
    if (e < min_expected) {
      pooled.observed += o;
      pooled.expected += e;
    } else {
      cells.push_back({o, e});
    }
  }
  if (pooled.expected > 0.0) {
    if (pooled.expected >= min_expected || cells.empty()) {
      cells.push_back(pooled);
    } else {
      auto smallest = std::min_element(cells.begin(), cells.end(),
                                       [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
      smallest->observed += pooled.observed;
      smallest->expected += pooled.expected;
    }
  }
  if (cells.size() < 2) throw Error(ErrorKind::DegenerateBins, "fewer than two bins after pooling");

  ChiSquareResult out;
  out.bins = cells.size();
  out.dof = static_cast<unsigned>(cells.size() - 1);
  if (impossible_hit) {
    out.statistic = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    return out;
  }
  for (const Cell& c : cells) {
    const double d = c.observed - c.expected;
    out.statistic += d * d / c.expected;
  }
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // The alternating series is useless for small lambda; use the theta-function
  // form of the distribution function there.
  if (lambda < 1.0) {
    const double pi = 3.14159265358979323846;
    double cdf = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double odd = 2.0 * j - 1.0;
      cdf += std::exp(-odd * odd * pi * pi / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::DegenerateBins, "empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  KsResult out;
  out.statistic = d;
  out.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  return out;
}

#define PARTLAB_INSTANTIATE(S)                                                                              \
  template PartitionLaw<S> exact_law(const ExtParams<S>&, unsigned);                                        \
  template S deletion_law_deviation(const PartitionLaw<S>&, unsigned,                                       \
                                    const std::function<PartitionLaw<S>(unsigned)>&);                       \
  template S deletion_law_check(const ExtParams<S>&, unsigned);                                             \
  template TauRegenReport<S> tau_regen_check(const ExtParams<S>&, unsigned);                                \
  template S leem_check(std::span<const S>, const S&);                                                      \
  template S record_independence_check(std::span<const S>);

PARTLAB_INSTANTIATE(Rational)
PARTLAB_INSTANTIATE(double)

#undef PARTLAB_INSTANTIATE

}  // namespace partlab
